//! Cyclic structure of binary codes: generator extraction, predicted
//! generators from the eigenvalues of a map, and minimum distance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2m::{FieldElement, FieldSpec};
use crate::linbin::{BinaryCode, BitVec};
use crate::poly::{minimal_polynomial_gf2, Polynomial};
use crate::projline::SpectralData;

/// Largest dimension [`min_distance`] will enumerate.
pub const DISTANCE_GUARD: usize = 24;

/// Coordinate i becomes the coefficient of x^i.
pub fn word_polynomial(v: &BitVec) -> Polynomial {
    let bits = (0..v.len()).map(|i| u32::from(v.get(i))).collect();
    Polynomial::from_bits(&FieldSpec::gf2(), bits).expect("binary coefficients")
}

pub fn polynomial_word(p: &Polynomial, n: usize) -> Result<BitVec> {
    let p = p
        .to_gf2()
        .ok_or_else(|| Error::InvalidArgument("expected binary coefficients".into()))?;
    if p.degree().is_some_and(|d| d >= n) {
        return Err(Error::LengthMismatch(p.degree().unwrap() + 1, n));
    }
    let mut v = BitVec::zeros(n);
    for (i, &c) in p.coeff_bits().iter().enumerate() {
        v.set(i, c == 1);
    }
    Ok(v)
}

/// Closed under (c₀, ..., c_{n−1}) ↦ (c_{n−1}, c₀, ..., c_{n−2}).
pub fn is_cyclic(code: &BinaryCode) -> bool {
    code.generator()
        .rows()
        .iter()
        .all(|row| code.contains(&row.rotate_right()).unwrap())
}

#[derive(Clone, Debug)]
pub struct CyclicReport {
    pub n: usize,
    pub k: usize,
    pub is_cyclic: bool,
    /// Monic generator; x^n − 1 for the zero code.
    pub generator: Option<Polynomial>,
    /// (x^n − 1) / generator.
    pub parity_check_poly: Option<Polynomial>,
    /// None when k = 0 or k exceeds [`DISTANCE_GUARD`].
    pub d: Option<usize>,
}

/// Generator as gcd of x^n − 1 and the basis words. With `require_cyclic`
/// a non-cyclic code is an error; otherwise it reports `is_cyclic = false`.
pub fn extract_generator(code: &BinaryCode, require_cyclic: bool) -> Result<CyclicReport> {
    let n = code.n();
    let cyclic = is_cyclic(code);
    if !cyclic && require_cyclic {
        return Err(Error::InvalidArgument("code is not cyclic".into()));
    }
    let xn = Polynomial::xn_minus_one(n);
    let (generator, parity_check_poly) = if cyclic {
        let mut g = xn.clone();
        for row in code.generator().rows() {
            g = g.gcd(&word_polynomial(row))?;
        }
        debug_assert_eq!(g.degree(), Some(n - code.k()));
        let h = xn.divmod(&g)?.0;
        (Some(g), Some(h))
    } else {
        (None, None)
    };
    let d = match min_distance(code) {
        Ok(d) => d,
        Err(Error::GuardExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(CyclicReport {
        n,
        k: code.k(),
        is_cyclic: cyclic,
        generator,
        parity_check_poly,
        d,
    })
}

/// Odd exponents that already account for every m_{ρ^{-i}}, 1 <= i <= s.
pub fn reduce_exponents(s: u32) -> Vec<u32> {
    (1..=s).filter(|i| i % 2 == 1).collect()
}

/// s + 2 for g₁^s, t + 2 for g₂^t, none for mixed products.
pub fn designed_distance(s: u32, t: u32) -> Option<u32> {
    match (s, t) {
        (0, 0) => None,
        (s, 0) => Some(s + 2),
        (0, t) => Some(t + 2),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct Prediction {
    /// (x + 1) lcm of m_{ρ^{-i}} over i <= s.
    pub u1: Polynomial,
    /// (x + 1) lcm of m_{ρ^i} over i <= t.
    pub u2: Polynomial,
    pub generator: Polynomial,
    pub designed_distance: Option<u32>,
    pub zero_code: bool,
}

fn root_product(base: &FieldElement, e: u32) -> Result<Polynomial> {
    let mut acc = Polynomial::from_mask(0b11);
    for i in reduce_exponents(e) {
        acc = acc.lcm(&minimal_polynomial_gf2(&base.pow(i64::from(i))?))?;
    }
    Ok(acc)
}

/// Generator predicted for the expurgated or extended code of g₁^s g₂^t.
pub fn predict_generator(spec: &SpectralData, s: u32, t: u32) -> Result<Prediction> {
    if s + t == 0 {
        return Err(Error::InvalidExponent("need s + t >= 1".into()));
    }
    let u1 = root_product(&spec.rho_inv, s)?;
    let u2 = root_product(&spec.rho, t)?;
    let generator = u1.lcm(&u2)?;
    let zero_code = generator.degree() == Some(spec.n as usize);
    Ok(Prediction {
        u1,
        u2,
        generator,
        designed_distance: designed_distance(s, t),
        zero_code,
    })
}

/// Minimum weight over nonzero codewords by Gray-code enumeration.
/// `Ok(None)` for the zero code.
pub fn min_distance(code: &BinaryCode) -> Result<Option<usize>> {
    let k = code.k();
    if k == 0 {
        return Ok(None);
    }
    if k > DISTANCE_GUARD {
        return Err(Error::GuardExceeded {
            k,
            limit: DISTANCE_GUARD,
        });
    }
    let rows = code.generator().rows();
    let mut word = BitVec::zeros(code.n());
    let mut best = usize::MAX;
    for step in 1u64..(1u64 << k) {
        word.xor_assign(&rows[step.trailing_zeros() as usize]);
        best = best.min(word.weight());
    }
    Ok(Some(best))
}

/// Outcome of comparing a single-sided code with its BCH-type bound.
#[derive(Clone, Debug, Serialize)]
pub struct BchCheck {
    /// 2⌊(e+1)/2⌋ + 2 for the nonzero exponent e.
    pub bound: u32,
    /// Predicted generator vanishes at ρ^{∓i} for every i in 0..=bound−2.
    pub run_holds: bool,
    /// d >= bound, or no distance to compare.
    pub distance_holds: bool,
}

/// Only defined when exactly one of s, t is nonzero.
pub fn bch_bound_check(
    spec: &SpectralData,
    prediction: &Prediction,
    s: u32,
    t: u32,
    d: Option<usize>,
) -> Option<BchCheck> {
    let (e, base) = match (s, t) {
        (0, 0) => return None,
        (e, 0) => (e, &spec.rho_inv),
        (0, e) => (e, &spec.rho),
        _ => return None,
    };
    let run_end = 2 * e.div_ceil(2);
    let bound = run_end + 2;
    let run_holds = (0..=run_end).all(|i| {
        let x = base.pow(i64::from(i)).unwrap();
        prediction.generator.eval_lifted(&x).unwrap().is_zero()
    });
    let distance_holds = d.is_none_or(|d| d >= bound as usize);
    Some(BchCheck {
        bound,
        run_holds,
        distance_holds,
    })
}
