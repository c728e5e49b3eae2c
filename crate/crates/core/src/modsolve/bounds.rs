use num_integer::Integer;

use super::ModsolveError;
use crate::rational::Rational;

/// Smallest possible |phi| for an injective support of length `len` with
/// `s` jumps, in closed form. Requires 1 <= s < len.
pub fn support_sum_lower_bound(s: u32, len: u32) -> Result<u128, ModsolveError> {
    if s == 0 || s >= len {
        return Err(ModsolveError::BadBound { s, len });
    }
    // len = q*s + r with 1 <= r <= s.
    let q = (len - 1) / s;
    let r = u128::from(len - q * s);
    let s = u128::from(s);
    let p = 1u128 << (q - 1);
    Ok(s * (s + 1) / 2 + (p - 1) * (3 * s * s + s) / 2 + p * r * (2 * s + r + 1) / 2)
}

/// The same bound as a direct sum c_1 + ... + c_len with c_i = i for i < 2s
/// and c_i = 2 c_{i-s} after; also defined for s = len.
pub fn support_sum_min(s: u32, len: u32) -> u128 {
    let (s, len) = (s.max(1) as usize, len as usize);
    let mut c = vec![0u128; len + 1];
    for i in 1..=len {
        c[i] = if i < 2 * s { i as u128 } else { 2 * c[i - s] };
    }
    c.iter().sum()
}

/// Largest length at which a solution of density below `density` is not
/// ruled out by the support-sum bound, for a set with largest member `max_d`.
/// Beyond it every irreducible solution has density at least `density`.
pub fn stabilization_bound(density: Rational, max_d: u32) -> u32 {
    // Distinct positive values give |phi| >= l(l+1)/2 while |phi| < density*l*max_d,
    // so l < 2*density*max_d.
    let limit = (density * Rational::from_integer(2 * i64::from(max_d))).ceil().to_integer().max(1) as u32;
    let mut bound = 0;
    for len in 1..=limit {
        let w = max_weight_below(density, len);
        if w == 0 {
            continue;
        }
        if support_sum_min(w.min(len), len) <= u128::from(w) * u128::from(max_d) {
            bound = len;
        }
    }
    bound
}

/// Largest w with w/len < density.
pub(crate) fn max_weight_below(density: Rational, len: u32) -> u32 {
    let scaled = density * Rational::from_integer(i64::from(len));
    let (n, d) = (*scaled.numer(), *scaled.denom());
    let ceil = Integer::div_ceil(&n, &d);
    (ceil - 1).max(0) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(support_sum_lower_bound(1, 3).unwrap(), 7);
        assert_eq!(support_sum_lower_bound(2, 6).unwrap(), 24);
        assert!(support_sum_lower_bound(5, 6).is_ok());
        assert_eq!(support_sum_lower_bound(0, 3), Err(ModsolveError::BadBound { s: 0, len: 3 }));
        assert_eq!(support_sum_lower_bound(3, 3), Err(ModsolveError::BadBound { s: 3, len: 3 }));
    }

    #[test]
    fn closed_form_matches_sum() {
        for len in 2..=48 {
            for s in 1..len {
                assert_eq!(support_sum_lower_bound(s, len).unwrap(), support_sum_min(s, len), "s={s} l={len}");
            }
        }
    }

    #[test]
    fn non_increasing_in_jumps() {
        for len in 1..=48 {
            for s in 1..len {
                assert!(support_sum_min(s + 1, len) <= support_sum_min(s, len));
            }
            assert_eq!(support_sum_min(len, len), u128::from(len * (len + 1) / 2));
        }
    }

    #[test]
    fn weight_below() {
        assert_eq!(max_weight_below(Rational::new(1, 3), 3), 0);
        assert_eq!(max_weight_below(Rational::new(1, 3), 4), 1);
        assert_eq!(max_weight_below(Rational::new(2, 7), 7), 1);
        assert_eq!(max_weight_below(Rational::from_integer(1), 5), 4);
    }

    #[test]
    fn stabilization_values() {
        // Values worked out by hand from the c_i sequence.
        assert_eq!(stabilization_bound(Rational::new(1, 4), 29), 0);
        assert_eq!(stabilization_bound(Rational::new(1, 3), 13), 0);
        assert_eq!(stabilization_bound(Rational::new(1, 3), 29), 13);
        assert_eq!(stabilization_bound(Rational::new(2, 7), 29), 11);
        assert_eq!(stabilization_bound(Rational::new(2, 9), 61), 14);
    }
}
