use rayon::prelude::*;

use super::{CurvePoly, ZetaError, MAX_SUM_DEGREE};
use crate::field::FieldCtx;

/// Largest number of coefficient bits (g+1)*a a batch table may cover.
pub const MAX_TABLE_BITS: u32 = 22;

const CHUNK: u64 = 1 << 14;

fn extension(ctx: &FieldCtx, m: u32) -> Result<FieldCtx, ZetaError> {
    let d = ctx.degree() * m;
    if m == 0 || d > MAX_SUM_DEGREE {
        return Err(ZetaError::ExtensionTooLarge(d));
    }
    Ok(FieldCtx::new(d)?)
}

/// S_m(f) = sum over x in F_{q^m} of (-1)^Tr(f(x)), the character being
/// (-1)^(absolute trace).
pub fn exponential_sum(f: &CurvePoly, m: u32) -> Result<i64, ZetaError> {
    let big = extension(f.ctx(), m)?;
    let emb = f.ctx().embedding_into(&big)?;
    // f(x) = x * P(x^2); P is evaluated by Horner on the sparse support,
    // jumping over gaps with square-and-multiply.
    let terms: Vec<(u32, u64)> = f.terms().map(|(e, c)| ((e - 1) / 2, emb.embed_bits(c.bits()))).collect();
    let eval = |x: u64| -> u64 {
        let y = big.square_bits(x);
        let mut acc = 0u64;
        let mut prev = terms[0].0;
        for &(i, c) in &terms {
            acc = big.mul_bits(acc, big.pow_bits(y, u64::from(prev - i))) ^ c;
            prev = i;
        }
        acc = big.mul_bits(acc, big.pow_bits(y, u64::from(prev)));
        big.mul_bits(acc, x)
    };
    let n = big.order();
    let sum = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(n);
            (lo..hi).map(|x| if big.trace_bits(eval(x)) { -1i64 } else { 1 }).sum::<i64>()
        })
        .sum();
    Ok(sum)
}

/// S_m for every coefficient vector of a genus-`genus` curve over `ctx` at once,
/// indexed by [`CurvePoly::code`].
///
/// Tr(c x^e) is F_2-linear in c, so each x contributes a sign pattern over the
/// (g+1)*a coefficient bits. Histogramming those patterns and applying a
/// Walsh-Hadamard transform yields all sums in O(q^m * g + 2^bits * bits).
/// Entries whose leading coefficient is zero are lower-genus curves and are
/// still correct sums.
pub fn exponential_sums_all(ctx: &FieldCtx, genus: u32, m: u32) -> Result<Vec<i64>, ZetaError> {
    let a = ctx.degree();
    let bits = (genus + 1) * a;
    if bits > MAX_TABLE_BITS {
        return Err(ZetaError::TableTooLarge(bits));
    }
    let big = extension(ctx, m)?;
    let emb = ctx.embedding_into(&big)?;
    // masks[j]: the linear form y -> Tr(beta^j y) as a bit mask over big's basis.
    let masks: Vec<u64> = (0..a as usize)
        .map(|j| {
            let beta = emb.basis_image(j);
            (0..big.degree()).filter(|&k| big.trace_bits(big.mul_bits(beta, 1 << k))).fold(0u64, |acc, k| acc | 1 << k)
        })
        .collect();
    let pattern = |x: u64| -> usize {
        let x2 = big.square_bits(x);
        let mut power = x;
        let mut out = 0usize;
        for i in 0..=genus {
            for (j, mask) in masks.iter().enumerate() {
                if (power & mask).count_ones() & 1 == 1 {
                    out |= 1 << (i * a + j as u32);
                }
            }
            power = big.mul_bits(power, x2);
        }
        out
    };
    let n = big.order();
    let mut hist = vec![0i64; 1 << bits];
    let mut buf = Vec::with_capacity(CHUNK as usize);
    for chunk in 0..n.div_ceil(CHUNK) {
        let lo = chunk * CHUNK;
        let hi = (lo + CHUNK).min(n);
        // u32 ranges are indexed, u64 ones are not; n <= 2^30 here.
        (lo as u32..hi as u32).into_par_iter().map(|x| pattern(u64::from(x))).collect_into_vec(&mut buf);
        for &p in &buf {
            hist[p] += 1;
        }
    }
    walsh_hadamard(&mut hist);
    Ok(hist)
}

fn walsh_hadamard(v: &mut [i64]) {
    let mut len = 1;
    while len < v.len() {
        for block in v.chunks_mut(2 * len) {
            let (lo, hi) = block.split_at_mut(len);
            for (u, w) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, t) = (*u + *w, *u - *w);
                *u = s;
                *w = t;
            }
        }
        len *= 2;
    }
}
