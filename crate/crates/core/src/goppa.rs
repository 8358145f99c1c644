//! Binary Goppa codes and their expurgated and extended variants, plus the
//! polynomial invariance test that makes them cyclic under a Möbius map.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2m::{FieldElement, FieldSpec};
use crate::linbin::{BinaryCode, FieldMatrix};
use crate::poly::{orbit_polynomial, Polynomial};
use crate::projline::{orbit_of, MoebiusMap, Orbit, ProjPoint, SpectralData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Expurgated,
    Extended,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "plain",
            Variant::Expurgated => "expurgated",
            Variant::Extended => "extended",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Variant::Plain),
            "expurgated" => Ok(Variant::Expurgated),
            "extended" => Ok(Variant::Extended),
            other => Err(Error::Parse(format!("unknown variant '{other}'"))),
        }
    }
}

/// Support, Goppa polynomial and variant over one working field.
#[derive(Clone, Debug)]
pub struct GoppaInstance {
    support: Vec<FieldElement>,
    g: Polynomial,
    variant: Variant,
}

impl GoppaInstance {
    /// Validates distinct support points, g nonvanishing on the support and
    /// deg g < |L| (plain, expurgated) or deg g < |L| + 1 (extended).
    pub fn new(support: Vec<FieldElement>, g: Polynomial, variant: Variant) -> Result<Self> {
        let inst = Self::new_unbounded(support, g, variant)?;
        let r = inst.degree();
        let limit = match variant {
            Variant::Extended => inst.support.len() + 1,
            _ => inst.support.len(),
        };
        if r >= limit {
            return Err(Error::DegreeBound(format!(
                "deg g = {r} must be below {limit} for the {variant} code"
            )));
        }
        Ok(inst)
    }

    /// Like [`GoppaInstance::new`] without the upper degree bound. Such
    /// instances always give the zero code.
    pub fn new_unbounded(
        support: Vec<FieldElement>,
        g: Polynomial,
        variant: Variant,
    ) -> Result<Self> {
        let field = g.field().clone();
        match g.degree() {
            None | Some(0) => {
                return Err(Error::DegreeBound(
                    "Goppa polynomial needs degree >= 1".into(),
                ))
            }
            Some(_) => {}
        }
        let mut seen = HashSet::new();
        for alpha in &support {
            field.ensure_same(alpha.field())?;
            if !seen.insert(alpha.bits()) {
                return Err(Error::DuplicateSupport);
            }
            if g.eval(alpha)?.is_zero() {
                return Err(Error::SupportRoot(alpha.to_string()));
            }
        }
        Ok(GoppaInstance {
            support,
            g,
            variant,
        })
    }

    /// Support taken from the finite points of a projective list.
    pub fn from_points(points: &[ProjPoint], g: Polynomial, variant: Variant) -> Result<Self> {
        let support = points
            .iter()
            .map(|p| {
                p.finite()
                    .cloned()
                    .ok_or_else(|| Error::InvalidArgument("inf cannot be a support point".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(support, g, variant)
    }

    pub fn field(&self) -> &FieldSpec {
        self.g.field()
    }

    pub fn support(&self) -> &[FieldElement] {
        &self.support
    }

    pub fn goppa_polynomial(&self) -> &Polynomial {
        &self.g
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn degree(&self) -> usize {
        self.g.degree().expect("nonzero")
    }

    /// Code length: |L|, or |L| + 1 for the extended code.
    pub fn length(&self) -> usize {
        match self.variant {
            Variant::Extended => self.support.len() + 1,
            _ => self.support.len(),
        }
    }
}

/// Rows α_i^j / g(α_i) for j < r (plain) or j <= r (expurgated, extended);
/// the extended matrix gets a final column (0, ..., 0, 1/g_r).
pub fn parity_check(inst: &GoppaInstance) -> FieldMatrix {
    let field = inst.field();
    let r = inst.degree();
    let rows = match inst.variant {
        Variant::Plain => r,
        _ => r + 1,
    };
    let mut h = FieldMatrix::zeros(field, rows, inst.length());
    for (i, alpha) in inst.support.iter().enumerate() {
        let inv = inst
            .g
            .eval(alpha)
            .unwrap()
            .inv()
            .expect("g has no support roots");
        let mut entry = inv;
        for j in 0..rows {
            h.set(j, i, &entry).unwrap();
            entry = &entry * alpha;
        }
    }
    if inst.variant == Variant::Extended {
        let lead_inv = inst.g.leading().unwrap().inv().unwrap();
        h.set(rows - 1, inst.support.len(), &lead_inv).unwrap();
    }
    h
}

/// The binary subfield subcode cut out by [`parity_check`].
pub fn build_code(inst: &GoppaInstance) -> BinaryCode {
    BinaryCode::from_parity_check(&parity_check(inst).expand_to_bits())
}

/// Finite points of an orbit in orbit order; fails if the orbit holds ∞.
pub fn orbit_support(orbit: &Orbit) -> Result<Vec<FieldElement>> {
    if orbit.contains_infinity() {
        return Err(Error::InvalidArgument(
            "orbit through inf cannot serve as a plain support".into(),
        ));
    }
    Ok(orbit.finite_points())
}

/// The orbit of ∞ without ∞, in the order A(∞), A²(∞), ..., so that the
/// extension coordinate closes the cycle.
pub fn extended_support(map: &MoebiusMap) -> Vec<FieldElement> {
    let orbit = orbit_of(map, &ProjPoint::Infinity);
    orbit.finite_points()
}

/// Whether (cX + d)^r g((aX + b)/(cX + d)) = c^r g(a/c) g^(σ^j)(X) holds
/// identically with X = x^(2^j), and c^r g(a/c) != 0.
pub fn satisfies_invariance(map: &MoebiusMap, g: &Polynomial) -> Result<bool> {
    map.field().ensure_same(g.field())?;
    if map.c().is_zero() {
        return Err(Error::Unsupported("invariance test needs c != 0".into()));
    }
    let field = map.field();
    let r = g.degree().ok_or(Error::DivisionByZero)?;
    let kappa = &map.c().pow(r as i64)? * &g.eval(&map.a().checked_div(map.c())?)?;
    if kappa.is_zero() {
        return Ok(false);
    }
    let num = Polynomial::from_elements(field, &[map.b().clone(), map.a().clone()])?;
    let den = Polynomial::from_elements(field, &[map.d().clone(), map.c().clone()])?;
    let mut num_pows = vec![Polynomial::one(field)];
    let mut den_pows = vec![Polynomial::one(field)];
    for _ in 0..r {
        num_pows.push(&num_pows[num_pows.len() - 1] * &num);
        den_pows.push(&den_pows[den_pows.len() - 1] * &den);
    }
    let mut lhs = Polynomial::zero(field);
    for i in 0..=r {
        let term = (&num_pows[i] * &den_pows[r - i]).scale(&g.coeff(i))?;
        lhs = &lhs + &term;
    }
    let rhs = g.frobenius_coeffs(map.frob()).scale(&kappa)?;
    Ok(lhs == rhs)
}

/// Strips orbit polynomials of the affine orbits off `g` greedily; true if
/// nothing but a constant remains.
pub fn factors_into_orbit_polynomials(g: &Polynomial, orbits: &[Orbit]) -> Result<bool> {
    if g.degree().unwrap_or(0) == 0 {
        return Err(Error::DegreeBound(
            "expected a polynomial of degree >= 1".into(),
        ));
    }
    let mut rest = g.monic()?;
    for orbit in orbits.iter().filter(|o| !o.contains_infinity()) {
        let op = orbit_polynomial(orbit)?;
        g.field().ensure_same(op.field())?;
        loop {
            let (q, r) = rest.divmod(&op)?;
            if !r.is_zero() {
                break;
            }
            rest = q;
        }
    }
    Ok(rest.degree() == Some(0))
}

/// x + (a+ρ)/c and x + (a+ρ⁻¹)/c over the working field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissiblePair {
    pub g1: Polynomial,
    pub g2: Polynomial,
}

impl AdmissiblePair {
    pub fn new(spec: &SpectralData) -> Self {
        let root = |p: &ProjPoint| {
            Polynomial::linear(p.finite().expect("c != 0 gives finite fixed points"))
        };
        AdmissiblePair {
            g1: root(&spec.fixed1),
            g2: root(&spec.fixed2),
        }
    }
}

/// Which field the coefficients of g₁^s g₂^t should live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    /// The field holding ρ: F_q or F_{q²}.
    Working,
    /// F_q even when ρ lies in F_{q²}; then s must equal t.
    Base,
}

#[derive(Clone, Debug)]
pub struct Admissible {
    pub g: Polynomial,
    pub s: u32,
    pub t: u32,
    /// s + t >= n − 1, so the codes are zero.
    pub zero_code_expected: bool,
    pub warning: Option<String>,
}

/// g₁^s g₂^t.
pub fn admissible_poly(
    spec: &SpectralData,
    s: u32,
    t: u32,
    coeffs: Coefficients,
) -> Result<Admissible> {
    if s + t == 0 {
        return Err(Error::InvalidExponent("need s + t >= 1".into()));
    }
    let pair = AdmissiblePair::new(spec);
    let g = &pair.g1.pow(s) * &pair.g2.pow(t);
    let g = match coeffs {
        Coefficients::Working => g,
        Coefficients::Base if spec.reducible => g,
        Coefficients::Base => {
            if s != t {
                return Err(Error::InvalidExponent(format!(
                    "F_q coefficients in the irreducible case need s = t, got s = {s}, t = {t}"
                )));
            }
            let base = spec.base_field();
            let coeffs = g
                .coeffs()
                .iter()
                .map(|c| {
                    spec.tower
                        .preimage(c)?
                        .ok_or_else(|| Error::Unsupported("coefficient outside F_q".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Polynomial::from_elements(base, &coeffs)?
        }
    };
    let n = spec.n;
    let zero = (s + t) as u64 >= n - 1;
    let warning = zero.then(|| {
        format!(
            "deg g = {} >= n - 1 = {}: the expurgated and extended codes are zero",
            s + t,
            n - 1
        )
    });
    Ok(Admissible {
        g,
        s,
        t,
        zero_code_expected: zero,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2m::TowerEmbedding;
    use crate::linbin::BitVec;
    use crate::projline::{partition, spectral};

    fn ex313() -> (MoebiusMap, SpectralData) {
        let f = FieldSpec::new(6, Some(0x5b)).unwrap();
        let m = MoebiusMap::parse(&f, "[[g^7,0],[1,g^-7]]", 0).unwrap();
        let tower = TowerEmbedding::new(&f).unwrap();
        let s = spectral(&m, &tower).unwrap();
        (m, s)
    }

    #[test]
    fn single_point_expurgated_matrix() {
        let f = FieldSpec::new(3, None).unwrap();
        let g = Polynomial::parse_over(&f, "x+1").unwrap();
        let inst = GoppaInstance::new_unbounded(vec![f.zero()], g, Variant::Expurgated).unwrap();
        let h = parity_check(&inst);
        assert_eq!((h.nrows(), h.ncols()), (2, 1));
        assert_eq!(h.get(0, 0), f.one());
        assert!(h.get(1, 0).is_zero());
    }

    #[test]
    fn extended_last_column() {
        let f = FieldSpec::new(4, None).unwrap();
        let g = Polynomial::parse_over(&f, "x^2+x+1").unwrap();
        let support: Vec<_> = [1, 2, 3].iter().map(|&k| f.from_log(k)).collect();
        let inst = GoppaInstance::new(support, g, Variant::Extended).unwrap();
        let h = parity_check(&inst);
        assert_eq!((h.nrows(), h.ncols()), (3, 4));
        assert!(h.get(0, 3).is_zero() && h.get(1, 3).is_zero());
        assert_eq!(h.get(2, 3), f.one());
        assert!(build_code(&inst).is_even());
    }

    #[test]
    fn identity_polynomial_rows() {
        let (m, _) = ex313();
        let f = m.field().clone();
        let orbit = orbit_of(&m, &ProjPoint::Finite(f.from_log(2)));
        let support = orbit_support(&orbit).unwrap();
        assert_eq!(support.len(), 9);
        let g = Polynomial::parse_over(&f, "x").unwrap();
        let inst = GoppaInstance::new(support.clone(), g, Variant::Expurgated).unwrap();
        let h = parity_check(&inst);
        for (i, a) in support.iter().enumerate() {
            assert_eq!(h.get(0, i), a.inv().unwrap());
            assert_eq!(h.get(1, i), f.one());
        }
        let code = build_code(&inst);
        assert_eq!((code.n(), code.k()), (9, 2));
        assert!(code.contains(&BitVec::zeros(9)).unwrap());
    }

    #[test]
    fn instance_validation() {
        let f = FieldSpec::new(4, None).unwrap();
        let g = Polynomial::parse_over(&f, "x^2+x+1").unwrap();
        let one = f.one();
        assert_eq!(
            GoppaInstance::new(vec![one.clone(), one.clone()], g.clone(), Variant::Plain)
                .unwrap_err(),
            Error::DuplicateSupport
        );
        // x^2+x+1 vanishes at g^5
        assert!(matches!(
            GoppaInstance::new(
                vec![f.from_log(5), one.clone(), f.zero()],
                g.clone(),
                Variant::Plain
            ),
            Err(Error::SupportRoot(_))
        ));
        assert!(matches!(
            GoppaInstance::new(vec![one.clone(), f.zero()], g.clone(), Variant::Expurgated),
            Err(Error::DegreeBound(_))
        ));
        assert!(GoppaInstance::new(vec![one, f.zero()], g, Variant::Extended).is_ok());
        assert!(matches!(
            GoppaInstance::from_points(
                &[ProjPoint::Infinity],
                Polynomial::linear(&f.one()),
                Variant::Plain
            ),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn admissible_degree_one_and_products() {
        let (m, s) = ex313();
        let pair = AdmissiblePair::new(&s);
        assert_ne!(pair.g1, pair.g2);
        // fixed point (a + ρ)/c = 0 here
        assert_eq!(pair.g1, Polynomial::parse_over(m.field(), "x").unwrap());
        assert!(satisfies_invariance(&m, &pair.g1).unwrap());
        assert!(satisfies_invariance(&m, &pair.g2).unwrap());
        assert!(satisfies_invariance(&m, &(&pair.g1 * &pair.g2)).unwrap());
        let a = admissible_poly(&s, 1, 0, Coefficients::Working).unwrap();
        assert_eq!(a.g, pair.g1);
        assert!(a.warning.is_none());
        let a = admissible_poly(&s, 1, 1, Coefficients::Working).unwrap();
        assert_eq!(a.g.degree(), Some(2));
        assert!(admissible_poly(&s, 0, 0, Coefficients::Working).is_err());
        assert!(
            admissible_poly(&s, 5, 3, Coefficients::Working)
                .unwrap()
                .zero_code_expected
        );
    }

    #[test]
    fn orbit_point_root_is_not_invariant() {
        let f = FieldSpec::new(4, None).unwrap();
        let tower = TowerEmbedding::new(&f).unwrap();
        let m = (1..16u32)
            .flat_map(|a| (1..16u32).map(move |d| (a, d)))
            .find_map(|(a, d)| {
                let (a, d) = (f.element(a).unwrap(), f.element(d).unwrap());
                let b = &(&a * &d) + &f.one();
                let m = MoebiusMap::normalize(&a, &b, &f.one(), &d, 0).ok()?;
                (spectral(&m, &tower).ok()?.n == 5).then_some(m)
            })
            .unwrap();
        let parts = partition(&m).unwrap();
        let full = parts
            .iter()
            .find(|o| o.len() == 5 && !o.contains_infinity())
            .unwrap();
        let beta = full.points()[0].finite().unwrap().clone();
        let g = Polynomial::linear(&beta);
        assert!(!satisfies_invariance(&m, &g).unwrap());
        assert!(!factors_into_orbit_polynomials(&g, &parts).unwrap());
        let op = orbit_polynomial(full).unwrap();
        assert!(satisfies_invariance(&m, &op).unwrap());
        assert!(factors_into_orbit_polynomials(&(&op * &op), &parts).unwrap());
        // two points of one orbit are not enough
        let next = full.points()[1].finite().unwrap().clone();
        let partial = &g * &Polynomial::linear(&next);
        assert!(!factors_into_orbit_polynomials(&partial, &parts).unwrap());
        assert!(!satisfies_invariance(&m, &partial).unwrap());
    }

    #[test]
    fn base_coefficients_in_irreducible_case() {
        let f = FieldSpec::new(4, Some(0x13)).unwrap();
        let tower = TowerEmbedding::new(&f).unwrap();
        let m = MoebiusMap::parse(&f, "[[g^11,g^5],[g^3,g^6]]", 0).unwrap();
        let s = spectral(&m, &tower).unwrap();
        assert!(!s.reducible);
        let a = admissible_poly(&s, 2, 2, Coefficients::Base).unwrap();
        assert_eq!(a.g.field(), &f);
        assert_eq!(a.g.degree(), Some(4));
        assert!(satisfies_invariance(&m, &a.g).unwrap());
        assert!(matches!(
            admissible_poly(&s, 2, 1, Coefficients::Base),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn twisted_invariance_identity() {
        // σ alone: every polynomial with GF(2) coefficients is invariant
        let f = FieldSpec::new(4, None).unwrap();
        let (o, z) = (f.one(), f.zero());
        let m = MoebiusMap::normalize(&z, &o, &o, &z, 1).unwrap();
        let g = Polynomial::parse_over(&f, "x^2+x+1").unwrap();
        assert!(satisfies_invariance(&m, &g).unwrap());
        let upper = MoebiusMap::normalize(&o, &o, &z, &o, 0).unwrap();
        assert!(matches!(
            satisfies_invariance(&upper, &g),
            Err(Error::Unsupported(_))
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn expurgated_codes_are_even(seed in any::<u64>(), m in 3u32..=5) {
                use rand::{seq::SliceRandom, Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let f = FieldSpec::new(m, None).unwrap();
                let mut pts: Vec<FieldElement> = f.elements().collect();
                pts.shuffle(&mut rng);
                let n = rng.gen_range(3..pts.len());
                let coeffs: Vec<u32> = (0..3).map(|_| rng.gen_range(0..f.size())).chain([1]).collect();
                let g = Polynomial::from_bits(&f, coeffs).unwrap();
                let support: Vec<_> = pts.into_iter().filter(|a| !g.eval(a).unwrap().is_zero()).take(n).collect();
                prop_assume!(support.len() > 3);
                for v in [Variant::Expurgated, Variant::Extended] {
                    let inst = GoppaInstance::new(support.clone(), g.clone(), v).unwrap();
                    let code = build_code(&inst);
                    prop_assert!(code.is_even());
                    let r = inst.degree();
                    prop_assert!(code.k() + (r + 1) * m as usize >= inst.length() - usize::from(v == Variant::Extended));
                }
            }
        }
    }
}
