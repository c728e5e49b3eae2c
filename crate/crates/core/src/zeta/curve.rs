use std::collections::BTreeMap;
use std::fmt;

use super::ZetaError;
use crate::field::{FieldCtx, FieldElement};

/// f(x) = sum of c_e x^e over odd e <= 2g+1, the right-hand side of the
/// Artin-Schreier model y^2 + y = f(x). Only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurvePoly {
    ctx: FieldCtx,
    genus: u32,
    coeffs: BTreeMap<u32, FieldElement>,
}

impl CurvePoly {
    /// Builds f from `(exponent, bits)` pairs. The genus is read off the
    /// largest exponent carrying a nonzero coefficient.
    pub fn new(ctx: FieldCtx, terms: impl IntoIterator<Item = (u32, u64)>) -> Result<Self, ZetaError> {
        let coeffs = collect_terms(&ctx, terms)?;
        let top = *coeffs.keys().next_back().ok_or(ZetaError::Empty)?;
        Ok(CurvePoly { ctx, genus: (top - 1) / 2, coeffs })
    }

    /// Builds f for a fixed genus; c_{2g+1} must be nonzero.
    pub fn with_genus(
        ctx: FieldCtx,
        genus: u32,
        terms: impl IntoIterator<Item = (u32, u64)>,
    ) -> Result<Self, ZetaError> {
        let coeffs = collect_terms(&ctx, terms)?;
        let max = 2 * genus + 1;
        if let Some(&e) = coeffs.keys().find(|&&e| e > max) {
            return Err(ZetaError::ExponentAboveDegree { exponent: e, max });
        }
        if !coeffs.contains_key(&max) {
            return Err(ZetaError::MissingLeading(max));
        }
        Ok(CurvePoly { ctx, genus, coeffs })
    }

    /// Parses `exponent:bits` pairs, e.g. `"7:1,3:1"`.
    pub fn parse(ctx: FieldCtx, text: &str) -> Result<Self, ZetaError> {
        CurvePoly::new(ctx, parse_terms(text)?)
    }

    /// Inverse of [`CurvePoly::code`].
    pub fn from_code(ctx: FieldCtx, genus: u32, code: u64) -> Result<Self, ZetaError> {
        let a = ctx.degree();
        let mask = ctx.order() - 1;
        let terms = (0..=genus).map(|i| (2 * i + 1, code >> (i * a) & mask));
        CurvePoly::with_genus(ctx, genus, terms)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// 2g + 1.
    pub fn degree(&self) -> u32 {
        2 * self.genus + 1
    }

    /// c_e, zero when absent (including exponents beyond the degree).
    pub fn coeff(&self, e: u32) -> FieldElement {
        self.coeffs.get(&e).copied().unwrap_or_else(|| self.ctx.zero())
    }

    /// Nonzero terms in decreasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, FieldElement)> + '_ {
        self.coeffs.iter().rev().map(|(&e, &c)| (e, c))
    }

    /// Exponents with nonzero coefficients, increasing.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.coeffs.keys().copied()
    }

    /// Packs the dense coefficient vector: bits `i*a .. (i+1)*a` hold c_{2i+1}.
    pub fn code(&self) -> u64 {
        let a = self.ctx.degree();
        self.coeffs.iter().fold(0u64, |acc, (&e, c)| acc | c.bits() << ((e - 1) / 2 * a))
    }

    /// `"7:1,3:1"`, decreasing exponents.
    pub fn encoding(&self) -> String {
        self.terms().map(|(e, c)| format!("{e}:{}", c.bits())).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for CurvePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} g={} f={}", self.ctx, self.genus, self.encoding())
    }
}

fn collect_terms(
    ctx: &FieldCtx,
    terms: impl IntoIterator<Item = (u32, u64)>,
) -> Result<BTreeMap<u32, FieldElement>, ZetaError> {
    let mut seen = BTreeMap::new();
    for (e, bits) in terms {
        if e % 2 == 0 {
            return Err(ZetaError::EvenExponent(e));
        }
        let c = ctx.element(bits)?;
        if seen.insert(e, c).is_some() {
            return Err(ZetaError::DuplicateExponent(e));
        }
    }
    seen.retain(|_, c| !c.is_zero());
    Ok(seen)
}

/// Parses `exponent:bits[,exponent:bits...]`; bits may be decimal or `0x` hex.
pub fn parse_terms(text: &str) -> Result<Vec<(u32, u64)>, ZetaError> {
    let bad = || ZetaError::BadTerms(text.to_string());
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (e, c) = pair.split_once(':').ok_or_else(bad)?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            let c = c.trim();
            let c = match c.strip_prefix("0x") {
                Some(hex) => u64::from_str_radix(hex, 16),
                None => c.parse(),
            }
            .map_err(|_| bad())?;
            Ok((e, c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldCtx {
        FieldCtx::new(1).unwrap()
    }

    #[test]
    fn genus_and_terms() {
        let f = CurvePoly::parse(f2(), "7:1,3:1").unwrap();
        assert_eq!(f.genus(), 3);
        assert_eq!(f.encoding(), "7:1,3:1");
        assert!(f.coeff(5).is_zero());
        assert_eq!(f.coeff(7).bits(), 1);
        assert!(f.coeff(99).is_zero());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(CurvePoly::parse(f2(), "4:1"), Err(ZetaError::EvenExponent(4)));
        assert_eq!(CurvePoly::parse(f2(), "3:1,3:1"), Err(ZetaError::DuplicateExponent(3)));
        assert_eq!(CurvePoly::parse(f2(), "3:0"), Err(ZetaError::Empty));
        assert!(CurvePoly::parse(f2(), "3:2").is_err());
        assert!(CurvePoly::parse(f2(), "3").is_err());
        assert_eq!(CurvePoly::with_genus(f2(), 3, [(5, 1)]), Err(ZetaError::MissingLeading(7)));
        assert!(matches!(CurvePoly::with_genus(f2(), 1, [(5, 1), (3, 1)]), Err(ZetaError::ExponentAboveDegree { .. })));
    }

    #[test]
    fn code_round_trip() {
        let f4 = FieldCtx::new(2).unwrap();
        let f = CurvePoly::parse(f4, "9:3,5:0x2,1:1").unwrap();
        let back = CurvePoly::from_code(f4, 4, f.code()).unwrap();
        assert_eq!(back, f);
        assert_eq!(f.code(), 1 | 2 << 4 | 3 << 8);
    }
}
