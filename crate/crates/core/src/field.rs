//! Arithmetic in binary fields F_{2^d}, 1 <= d <= 32.
//!
//! Elements are stored as the coefficient vector of their residue polynomial,
//! packed into a `u64` (bit `i` is the coefficient of `t^i`). Every degree has
//! one canonical modulus: the irreducible polynomial of that degree whose
//! integer encoding is smallest. Two builds of this crate therefore agree on
//! every bit of every element.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 32;

/// Largest degree for which the whole field may be enumerated.
pub const MAX_ENUMERATION_DEGREE: u32 = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field degree {0} is outside 1..=32")]
    DegreeOutOfRange(u32),
    #[error("element of F_2^{found} used in the context of F_2^{expected}")]
    ContextMismatch { expected: u32, found: u32 },
    #[error("F_2^{0} is too large to enumerate (limit F_2^30)")]
    TooLargeToEnumerate(u32),
    #[error("bits {bits:#x} do not encode an element of F_2^{degree}")]
    ValueOutOfRange { bits: u64, degree: u32 },
    #[error("polynomial {0:#b} is not irreducible of the requested degree")]
    Reducible(u64),
    #[error("F_2^{small} is not a subfield of F_2^{big}")]
    NotASubfield { small: u32, big: u32 },
    #[error("invalid field spec {0:?}, expected 2^a")]
    BadSpec(String),
}

/// An element of some F_{2^d}. The degree travels with the bits so that mixing
/// contexts is detected instead of silently producing garbage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    bits: u64,
    degree: u32,
}

impl FieldElement {
    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn degree(self) -> u32 {
        self.degree
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: FieldElement) -> FieldElement {
        assert_eq!(self.degree, rhs.degree, "adding elements of different fields");
        FieldElement { bits: self.bits ^ rhs.bits, degree: self.degree }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

/// The field F_{2^d} with its canonical modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    degree: u32,
    modulus: u64,
    /// Bit `i` is the absolute trace of `t^i`.
    trace_mask: u64,
}

impl FieldCtx {
    /// The canonical context of degree `a`.
    pub fn new(a: u32) -> Result<Self, FieldError> {
        if !(1..=MAX_DEGREE).contains(&a) {
            return Err(FieldError::DegreeOutOfRange(a));
        }
        Ok(Self::from_parts(a, canonical_modulus(a)))
    }

    /// A context with an explicit modulus, which must be irreducible of degree `a`.
    pub fn with_modulus(a: u32, modulus: u64) -> Result<Self, FieldError> {
        if !(1..=MAX_DEGREE).contains(&a) {
            return Err(FieldError::DegreeOutOfRange(a));
        }
        if poly_degree(modulus) != Some(a) || !is_irreducible(modulus) {
            return Err(FieldError::Reducible(modulus));
        }
        Ok(Self::from_parts(a, modulus))
    }

    fn from_parts(degree: u32, modulus: u64) -> Self {
        let mut ctx = FieldCtx { degree, modulus, trace_mask: 0 };
        let mut mask = 0u64;
        let mut basis = 1u64;
        for i in 0..degree {
            if ctx.trace_by_squaring(basis) {
                mask |= 1 << i;
            }
            basis = ctx.mul_bits(basis, 2);
        }
        ctx.trace_mask = mask;
        ctx
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of elements, 2^d.
    pub fn order(&self) -> u64 {
        1u64 << self.degree
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { bits: 0, degree: self.degree }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { bits: 1, degree: self.degree }
    }

    /// The class of `t` (the polynomial variable).
    pub fn generator(&self) -> FieldElement {
        FieldElement { bits: poly_rem(2, self.modulus), degree: self.degree }
    }

    pub fn element(&self, bits: u64) -> Result<FieldElement, FieldError> {
        if bits >= self.order() {
            return Err(FieldError::ValueOutOfRange { bits, degree: self.degree });
        }
        Ok(FieldElement { bits, degree: self.degree })
    }

    fn check(&self, x: FieldElement) -> Result<(), FieldError> {
        if x.degree != self.degree {
            return Err(FieldError::ContextMismatch { expected: self.degree, found: x.degree });
        }
        Ok(())
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(FieldElement { bits: x.bits ^ y.bits, degree: self.degree })
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        self.check(y)?;
        Ok(FieldElement { bits: self.mul_bits(x.bits, y.bits), degree: self.degree })
    }

    pub fn square(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        self.mul(x, x)
    }

    /// `x^(2^k)`, computed by `k` squarings.
    pub fn frobenius(&self, x: FieldElement, k: u32) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        let mut bits = x.bits;
        for _ in 0..k {
            bits = self.mul_bits(bits, bits);
        }
        Ok(FieldElement { bits, degree: self.degree })
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> Result<FieldElement, FieldError> {
        self.check(x)?;
        Ok(FieldElement { bits: self.pow_bits(x.bits, e), degree: self.degree })
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, x: FieldElement) -> Result<Option<FieldElement>, FieldError> {
        self.check(x)?;
        Ok(self.inv_bits(x.bits).map(|bits| FieldElement { bits, degree: self.degree }))
    }

    /// Absolute trace to F_2.
    pub fn abs_trace(&self, x: FieldElement) -> Result<u8, FieldError> {
        self.check(x)?;
        Ok(self.trace_bits(x.bits) as u8)
    }

    /// All elements in increasing bit order.
    pub fn elements(&self) -> Result<impl Iterator<Item = FieldElement>, FieldError> {
        if self.degree > MAX_ENUMERATION_DEGREE {
            return Err(FieldError::TooLargeToEnumerate(self.degree));
        }
        let degree = self.degree;
        Ok((0..self.order()).map(move |bits| FieldElement { bits, degree }))
    }

    // Raw-bit entry points for inner loops; callers guarantee bits < 2^d.

    #[inline]
    pub fn mul_bits(&self, mut a: u64, mut b: u64) -> u64 {
        let top = 1u64 << self.degree;
        let mut acc = 0u64;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        acc
    }

    #[inline]
    pub fn square_bits(&self, a: u64) -> u64 {
        self.mul_bits(a, a)
    }

    pub fn pow_bits(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul_bits(acc, base);
            }
            base = self.mul_bits(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv_bits(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.pow_bits(a, self.order() - 2))
    }

    #[inline]
    pub fn trace_bits(&self, a: u64) -> bool {
        (a & self.trace_mask).count_ones() & 1 == 1
    }

    /// Trace as the literal sum x + x^2 + ... + x^(2^(d-1)).
    fn trace_by_squaring(&self, a: u64) -> bool {
        let mut acc = 0u64;
        let mut power = a;
        for _ in 0..self.degree {
            acc ^= power;
            power = self.mul_bits(power, power);
        }
        debug_assert!(acc <= 1);
        acc == 1
    }

    /// Embedding of `self` into `big`, sending `t` to the smallest root of
    /// `self`'s modulus in `big`.
    pub fn embedding_into(&self, big: &FieldCtx) -> Result<Embedding, FieldError> {
        if !big.degree.is_multiple_of(self.degree) {
            return Err(FieldError::NotASubfield { small: self.degree, big: big.degree });
        }
        let root = smallest_root(self.modulus, self.degree, big);
        let mut powers = Vec::with_capacity(self.degree as usize);
        let mut p = 1u64;
        for _ in 0..self.degree {
            powers.push(p);
            p = big.mul_bits(p, root);
        }
        Ok(Embedding { small: *self, big: *big, powers })
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.degree)
    }
}

impl FromStr for FieldCtx {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FieldCtx::new(parse_field_spec(s)?)
    }
}

/// Parses `2^a` (or the plain power `q`) into the degree `a`.
pub fn parse_field_spec(s: &str) -> Result<u32, FieldError> {
    let bad = || FieldError::BadSpec(s.to_string());
    let t = s.trim();
    if let Some(exp) = t.strip_prefix("2^") {
        let a: u32 = exp.trim().parse().map_err(|_| bad())?;
        if !(1..=MAX_DEGREE).contains(&a) {
            return Err(FieldError::DegreeOutOfRange(a));
        }
        return Ok(a);
    }
    let q: u64 = t.parse().map_err(|_| bad())?;
    if q < 2 || !q.is_power_of_two() {
        return Err(bad());
    }
    let a = q.trailing_zeros();
    if a > MAX_DEGREE {
        return Err(FieldError::DegreeOutOfRange(a));
    }
    Ok(a)
}

/// F_2-linear embedding F_{2^a} -> F_{2^(a m)}.
#[derive(Clone, Debug)]
pub struct Embedding {
    small: FieldCtx,
    big: FieldCtx,
    /// Images of 1, t, t^2, ... of the small field.
    powers: Vec<u64>,
}

impl Embedding {
    pub fn small(&self) -> &FieldCtx {
        &self.small
    }

    pub fn big(&self) -> &FieldCtx {
        &self.big
    }

    pub fn embed(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        self.small.check(x)?;
        Ok(FieldElement { bits: self.embed_bits(x.bits), degree: self.big.degree })
    }

    pub fn embed_bits(&self, bits: u64) -> u64 {
        self.powers.iter().enumerate().filter(|(j, _)| bits >> j & 1 == 1).fold(0, |acc, (_, p)| acc ^ p)
    }

    /// Image of `t^j` for the j-th basis vector of the small field.
    pub fn basis_image(&self, j: usize) -> u64 {
        self.powers[j]
    }
}

fn poly_degree(p: u64) -> Option<u32> {
    (p != 0).then(|| 63 - p.leading_zeros())
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b).expect("division by zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// `a * b mod m` for arbitrary binary polynomials with deg a, deg b < deg m.
fn poly_mulmod(mut a: u64, mut b: u64, m: u64, dm: u32) -> u64 {
    let top = 1u64 << dm;
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= m;
        }
    }
    acc
}

/// Rabin's test: p of degree d is irreducible iff x^(2^d) = x mod p and
/// gcd(x^(2^(d/r)) - x, p) = 1 for every prime r dividing d.
pub fn is_irreducible(p: u64) -> bool {
    let Some(d) = poly_degree(p) else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = poly_rem(2, p);
    let frob = |k: u32| {
        let mut y = x;
        for _ in 0..k {
            y = poly_mulmod(y, y, p, d);
        }
        y
    };
    if frob(d) != x {
        return false;
    }
    let mut n = d;
    let mut r = 2;
    let mut primes = Vec::new();
    while r * r <= n {
        if n % r == 0 {
            primes.push(r);
            while n % r == 0 {
                n /= r;
            }
        }
        r += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes.into_iter().all(|r| poly_gcd(frob(d / r) ^ x, p) == 1)
}

fn canonical_modulus(a: u32) -> u64 {
    static MODULI: [OnceLock<u64>; MAX_DEGREE as usize + 1] = [const { OnceLock::new() }; MAX_DEGREE as usize + 1];
    *MODULI[a as usize].get_or_init(|| {
        (1u64 << a..1u64 << (a + 1))
            .find(|&p| is_irreducible(p))
            .expect("irreducible polynomials exist in every degree")
    })
}

/// Smallest element of `big` that is a root of the binary polynomial `poly`
/// of degree `a`. The roots lie in the subfield F_{2^a}, which is the kernel of
/// x -> x^(2^a) + x, so only that kernel is searched.
fn smallest_root(poly: u64, a: u32, big: &FieldCtx) -> u64 {
    let d = big.degree;
    let frob_plus_id = |x: u64| {
        let mut y = x;
        for _ in 0..a {
            y = big.square_bits(y);
        }
        y ^ x
    };
    // Gaussian elimination on (image, combination) pairs; rows reducing to a
    // zero image give kernel vectors.
    let mut pivots: Vec<(u64, u64)> = Vec::new();
    let mut kernel = Vec::new();
    for i in 0..d {
        let mut img = frob_plus_id(1u64 << i);
        let mut comb = 1u64 << i;
        for &(pimg, pcomb) in &pivots {
            if img ^ pimg < img {
                img ^= pimg;
                comb ^= pcomb;
            }
        }
        if img == 0 {
            kernel.push(comb);
        } else {
            pivots.push((img, comb));
            pivots.sort_unstable_by_key(|p| std::cmp::Reverse(p.0));
        }
    }
    debug_assert_eq!(kernel.len() as u32, a);
    let eval = |x: u64| (0..=a).rev().fold(0u64, |acc, i| big.mul_bits(acc, x) ^ (poly >> i & 1));
    (0u64..1 << kernel.len())
        .map(|sel| kernel.iter().enumerate().filter(|(j, _)| sel >> j & 1 == 1).fold(0, |acc, (_, k)| acc ^ k))
        .filter(|&x| eval(x) == 0)
        .min()
        .expect("an irreducible polynomial of degree a splits in F_2^(a m)")
}
