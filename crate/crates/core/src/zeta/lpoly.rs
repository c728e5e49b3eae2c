use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{exponential_sum, CurvePoly, NewtonPolygon, ZetaError};

/// Numerator L(T) = a_0 + a_1 T + ... + a_{2g} T^{2g} of the zeta function,
/// over F_q with q = 2^a.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPolynomial {
    q_degree: u32,
    genus: u32,
    coeffs: Vec<BigInt>,
}

impl LPolynomial {
    /// Builds L from S_1..S_g and fills the top half from the functional
    /// equation. Extra sums beyond the first g are ignored.
    pub fn from_sums(q_degree: u32, genus: u32, sums: &[i64]) -> Result<Self, ZetaError> {
        let g = genus as usize;
        if sums.len() < g {
            return Err(ZetaError::MissingSums { needed: g, got: sums.len() });
        }
        let mut coeffs = newton_identities(&sums[..g])?;
        coeffs.resize(2 * g + 1, BigInt::zero());
        let q = BigInt::one() << q_degree;
        for k in 0..g {
            coeffs[2 * g - k] = &coeffs[k] * num_traits::pow(q.clone(), g - k);
        }
        Ok(LPolynomial { q_degree, genus, coeffs })
    }

    /// Builds L from all of S_1..S_{2g} and checks the functional equation
    /// and the Weil bound instead of assuming them.
    pub fn from_all_sums(q_degree: u32, genus: u32, sums: &[i64]) -> Result<Self, ZetaError> {
        let n = 2 * genus as usize;
        if sums.len() < n {
            return Err(ZetaError::MissingSums { needed: n, got: sums.len() });
        }
        let l = LPolynomial { q_degree, genus, coeffs: newton_identities(&sums[..n])? };
        l.check_functional_equation()?;
        l.check_weil_bound()?;
        Ok(l)
    }

    pub fn q_degree(&self) -> u32 {
        self.q_degree
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn check_functional_equation(&self) -> Result<(), ZetaError> {
        let g = self.genus as usize;
        let q = BigInt::one() << self.q_degree;
        for k in 0..=g {
            if self.coeffs[2 * g - k] != &self.coeffs[k] * num_traits::pow(q.clone(), g - k) {
                return Err(ZetaError::FunctionalEquation(2 * g - k));
            }
        }
        Ok(())
    }

    /// |a_k| <= C(2g, k) q^{k/2}, compared after squaring.
    pub fn check_weil_bound(&self) -> Result<(), ZetaError> {
        let n = 2 * self.genus as usize;
        let mut binom = BigInt::one();
        for (k, a) in self.coeffs.iter().enumerate() {
            let bound_sq = (&binom * &binom) << (self.q_degree as usize * k);
            if a * a > bound_sq {
                return Err(ZetaError::WeilBound(k));
            }
            binom = binom * (n - k) / (k + 1);
        }
        Ok(())
    }

    /// a_k even for every k >= 1.
    pub fn has_two_rank_zero(&self) -> bool {
        self.coeffs.iter().skip(1).all(|a| a.is_even())
    }

    /// Recovers S_1..S_k from the coefficients; inverse of the construction.
    pub fn power_sums(&self, k: usize) -> Vec<BigInt> {
        let a = |i: usize| self.coeffs.get(i).cloned().unwrap_or_default();
        let mut sums: Vec<BigInt> = Vec::with_capacity(k);
        for j in 1..=k {
            let mut s = BigInt::from(j) * a(j);
            for (m, sm) in sums.iter().enumerate() {
                s -= sm * a(j - m - 1);
            }
            sums.push(s);
        }
        sums
    }

    pub fn newton_polygon(&self) -> NewtonPolygon {
        NewtonPolygon::from_l_polynomial(self)
    }
}

/// k a_k = sum_{m=1..k} S_m a_{k-m}, from L = exp(sum S_m T^m / m).
fn newton_identities(sums: &[i64]) -> Result<Vec<BigInt>, ZetaError> {
    let mut a = vec![BigInt::one()];
    for k in 1..=sums.len() {
        let mut acc = BigInt::zero();
        for m in 1..=k {
            acc += BigInt::from(sums[m - 1]) * &a[k - m];
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(ZetaError::NonIntegral(k));
        }
        a.push(quot);
    }
    Ok(a)
}

fn sums_up_to(f: &CurvePoly, count: u32) -> Result<Vec<i64>, ZetaError> {
    (1..=count).map(|m| exponential_sum(f, m)).collect()
}

/// L(C_f, T) from S_1..S_g and the functional equation.
pub fn l_polynomial(f: &CurvePoly) -> Result<LPolynomial, ZetaError> {
    let sums = sums_up_to(f, f.genus())?;
    LPolynomial::from_sums(f.ctx().degree(), f.genus(), &sums)
}

/// L(C_f, T) from all of S_1..S_{2g}, with every invariant checked.
pub fn l_polynomial_verified(f: &CurvePoly) -> Result<LPolynomial, ZetaError> {
    let sums = sums_up_to(f, 2 * f.genus())?;
    let l = LPolynomial::from_all_sums(f.ctx().degree(), f.genus(), &sums)?;
    let fast = LPolynomial::from_sums(f.ctx().degree(), f.genus(), &sums)?;
    if fast != l {
        return Err(ZetaError::FunctionalEquation(f.genus() as usize));
    }
    Ok(l)
}
