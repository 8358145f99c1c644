//! The projective line over GF(2^m) and the action of PΓL₂ on it.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2m::{solve_unit_quadratic, FieldElement, FieldSpec, TowerEmbedding};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ProjPoint {
    Finite(FieldElement),
    Infinity,
}

impl ProjPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<&FieldElement> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }

    /// Element literal or `inf`.
    pub fn parse(field: &FieldSpec, lit: &str) -> Result<Self> {
        match lit.trim() {
            "inf" | "∞" => Ok(ProjPoint::Infinity),
            other => field.parse_element(other).map(ProjPoint::Finite),
        }
    }

    /// Every point of the projective line over `field`, ∞ last.
    pub fn all(field: &FieldSpec) -> Vec<ProjPoint> {
        field
            .elements()
            .map(ProjPoint::Finite)
            .chain(std::iter::once(ProjPoint::Infinity))
            .collect()
    }

    pub fn embed(&self, tower: &TowerEmbedding) -> Result<ProjPoint> {
        match self {
            ProjPoint::Finite(x) => tower.embed(x).map(ProjPoint::Finite),
            ProjPoint::Infinity => Ok(ProjPoint::Infinity),
        }
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ProjPoint::Finite(a), ProjPoint::Finite(b)) => a.cmp(b),
            (ProjPoint::Finite(_), ProjPoint::Infinity) => Ordering::Less,
            (ProjPoint::Infinity, ProjPoint::Finite(_)) => Ordering::Greater,
            (ProjPoint::Infinity, ProjPoint::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{x}"),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// ζ ↦ (a ζ^(2^j) + b) / (c ζ^(2^j) + d), stored with ad + bc = 1.
///
/// With unit determinant the representative is unique in characteristic
/// 2, so equal maps have equal entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MoebiusMap {
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
    d: FieldElement,
    frob: u32,
}

impl MoebiusMap {
    pub fn normalize(
        a: &FieldElement,
        b: &FieldElement,
        c: &FieldElement,
        d: &FieldElement,
        frob: u32,
    ) -> Result<Self> {
        let field = a.field();
        for x in [b, c, d] {
            field.ensure_same(x.field())?;
        }
        if frob >= field.m().max(1) {
            return Err(Error::InvalidArgument(format!(
                "Frobenius exponent {frob} must be below {}",
                field.m()
            )));
        }
        let det = &(a * d) + &(b * c);
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let s = det.sqrt().inv()?;
        Ok(MoebiusMap {
            a: a * &s,
            b: b * &s,
            c: c * &s,
            d: d * &s,
            frob,
        })
    }

    pub fn identity(field: &FieldSpec) -> Self {
        MoebiusMap {
            a: field.one(),
            b: field.zero(),
            c: field.zero(),
            d: field.one(),
            frob: 0,
        }
    }

    /// Parses `[[a,b],[c,d]]` with element literals.
    pub fn parse(field: &FieldSpec, text: &str, frob: u32) -> Result<Self> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = cleaned
            .strip_prefix("[[")
            .and_then(|t| t.strip_suffix("]]"))
            .ok_or_else(|| Error::Parse(format!("matrix must look like [[a,b],[c,d]]: {text}")))?;
        let entries: Vec<&str> = inner.split("],[").flat_map(|row| row.split(',')).collect();
        if entries.len() != 4 {
            return Err(Error::Parse(format!("matrix needs 4 entries: {text}")));
        }
        let e = entries
            .iter()
            .map(|lit| field.parse_element(lit))
            .collect::<Result<Vec<_>>>()?;
        Self::normalize(&e[0], &e[1], &e[2], &e[3], frob)
    }

    pub fn field(&self) -> &FieldSpec {
        self.a.field()
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    pub fn c(&self) -> &FieldElement {
        &self.c
    }

    pub fn d(&self) -> &FieldElement {
        &self.d
    }

    pub fn frob(&self) -> u32 {
        self.frob
    }

    pub fn trace(&self) -> FieldElement {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.frob == 0 && self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn apply(&self, z: &ProjPoint) -> ProjPoint {
        match z {
            ProjPoint::Infinity => {
                if self.c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(self.a.checked_div(&self.c).unwrap())
                }
            }
            ProjPoint::Finite(x) => {
                let x = x.frobenius(self.frob);
                let num = &(&self.a * &x) + &self.b;
                let den = &(&self.c * &x) + &self.d;
                match num.checked_div(&den) {
                    Ok(v) => ProjPoint::Finite(v),
                    Err(_) => ProjPoint::Infinity,
                }
            }
        }
    }

    /// self ∘ other
    pub fn compose(&self, other: &MoebiusMap) -> Result<MoebiusMap> {
        self.field().ensure_same(other.field())?;
        let j = self.frob;
        let (b_a, b_b, b_c, b_d) = (
            other.a.frobenius(j),
            other.b.frobenius(j),
            other.c.frobenius(j),
            other.d.frobenius(j),
        );
        let frob = (j + other.frob) % self.field().m();
        Self::normalize(
            &(&(&self.a * &b_a) + &(&self.b * &b_c)),
            &(&(&self.a * &b_b) + &(&self.b * &b_d)),
            &(&(&self.c * &b_a) + &(&self.d * &b_c)),
            &(&(&self.c * &b_b) + &(&self.d * &b_d)),
            frob,
        )
    }

    pub fn pow(&self, k: u64) -> MoebiusMap {
        let mut acc = Self::identity(self.field());
        for _ in 0..k {
            acc = self.compose(&acc).expect("same field");
        }
        acc
    }

    /// Least k >= 1 with M^k the identity of PΓL₂.
    pub fn order(&self) -> u64 {
        let bound = 2 * (self.field().size() as u64 + 1) * self.field().m() as u64;
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = self.compose(&acc).expect("same field");
            k += 1;
            assert!(k <= bound, "order search ran past the group exponent bound");
        }
        k
    }

    /// Order as a permutation of the projective line over the map's field.
    pub fn permutation_order(&self) -> u64 {
        let mut order = 1u64;
        let mut seen = std::collections::HashSet::new();
        for p in ProjPoint::all(self.field()) {
            if seen.contains(&p) {
                continue;
            }
            let orbit = orbit_of(self, &p);
            for q in orbit.points() {
                seen.insert(q.clone());
            }
            let len = orbit.len() as u64;
            order = order / crate::gf2m::gcd_u64(order, len) * len;
        }
        order
    }

    /// The same matrix over the quadratic extension; j must be 0.
    pub fn lift(&self, tower: &TowerEmbedding) -> Result<MoebiusMap> {
        if self.frob != 0 {
            return Err(Error::Unsupported(
                "lifting maps with a Frobenius twist to the extension".into(),
            ));
        }
        Ok(MoebiusMap {
            a: tower.embed(&self.a)?,
            b: tower.embed(&self.b)?,
            c: tower.embed(&self.c)?,
            d: tower.embed(&self.d)?,
            frob: 0,
        })
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)?;
        if self.frob != 0 {
            write!(f, " frob={}", self.frob)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Eigen-data of a map with c != 0, a + d != 0 and no Frobenius twist.
#[derive(Clone, Debug)]
pub struct SpectralData {
    /// The map as given, over F_q.
    pub map: MoebiusMap,
    /// The map over the working field: F_q when reducible, F_{q²} otherwise.
    pub working_map: MoebiusMap,
    pub tower: TowerEmbedding,
    pub trace: FieldElement,
    /// Eigenvalues in the working field.
    pub rho: FieldElement,
    pub rho_inv: FieldElement,
    /// Eigenvalues in the extension, whatever the branch.
    pub rho_ext: FieldElement,
    pub reducible: bool,
    pub n: u64,
    /// (a + ρ)/c
    pub fixed1: ProjPoint,
    /// (a + ρ⁻¹)/c
    pub fixed2: ProjPoint,
    /// Rows [a + ρ⁻¹, a + ρ; c, c] over the working field.
    pub p: [[FieldElement; 2]; 2],
}

impl SpectralData {
    pub fn working_field(&self) -> &FieldSpec {
        self.working_map.field()
    }

    pub fn base_field(&self) -> &FieldSpec {
        self.map.field()
    }

    /// P as a map of the projective line.
    pub fn p_map(&self) -> MoebiusMap {
        let [[p00, p01], [p10, p11]] = &self.p;
        MoebiusMap::normalize(p00, p01, p10, p11, 0).expect("det P = c t != 0")
    }

    /// Checks A·P = P·diag(ρ, ρ⁻¹) entrywise over the working field.
    pub fn diagonalizes(&self) -> bool {
        let m = &self.working_map;
        let [[p00, p01], [p10, p11]] = &self.p;
        let ap = [
            [
                &(m.a() * p00) + &(m.b() * p10),
                &(m.a() * p01) + &(m.b() * p11),
            ],
            [
                &(m.c() * p00) + &(m.d() * p10),
                &(m.c() * p01) + &(m.d() * p11),
            ],
        ];
        let pd = [
            [p00 * &self.rho, p01 * &self.rho_inv],
            [p10 * &self.rho, p11 * &self.rho_inv],
        ];
        ap == pd
    }

    /// Whether ord(A) divides q − 1 (reducible) or q + 1 (irreducible).
    pub fn order_divides_group(&self) -> bool {
        let q = self.base_field().size() as u64;
        if self.reducible {
            (q - 1).is_multiple_of(self.n)
        } else {
            (q + 1).is_multiple_of(self.n)
        }
    }
}

pub fn spectral(map: &MoebiusMap, tower: &TowerEmbedding) -> Result<SpectralData> {
    tower.base().ensure_same(map.field())?;
    if map.frob() != 0 {
        return Err(Error::Unsupported(
            "spectral data needs a map without Frobenius twist".into(),
        ));
    }
    if map.c().is_zero() {
        return Err(Error::Unsupported("maps with c = 0 are not treated".into()));
    }
    let trace = map.trace();
    if trace.is_zero() {
        return Err(Error::ExcludedOrderTwo);
    }
    let roots = solve_unit_quadratic(&trace, tower)?;
    let (working_map, rho, rho_inv) = if roots.reducible {
        (
            map.clone(),
            tower.preimage(&roots.rho)?.expect("reducible"),
            tower.preimage(&roots.rho_inv)?.expect("reducible"),
        )
    } else {
        (map.lift(tower)?, roots.rho.clone(), roots.rho_inv.clone())
    };
    let n = rho.multiplicative_order().expect("rho != 0");
    assert_eq!(n, map.order(), "ord(A) must equal ord(rho)");
    assert!(n > 2 && n % 2 == 1, "ord(A) = {n} must be odd and above 2");

    let a = working_map.a().clone();
    let c = working_map.c().clone();
    let fixed1 = ProjPoint::Finite((&a + &rho).checked_div(&c)?);
    let fixed2 = ProjPoint::Finite((&a + &rho_inv).checked_div(&c)?);
    let p = [[&a + &rho_inv, &a + &rho], [c.clone(), c]];
    let data = SpectralData {
        map: map.clone(),
        working_map,
        tower: tower.clone(),
        trace,
        rho,
        rho_inv,
        rho_ext: roots.rho,
        reducible: roots.reducible,
        n,
        fixed1,
        fixed2,
        p,
    };
    assert!(data.diagonalizes());
    assert!(data.order_divides_group());
    assert_eq!(data.working_map.apply(&data.fixed1), data.fixed1);
    assert_eq!(data.working_map.apply(&data.fixed2), data.fixed2);
    Ok(data)
}

/// Points [α, M(α), M²(α), ...] up to the return to α.
#[derive(Clone, PartialEq, Eq)]
pub struct Orbit {
    map: MoebiusMap,
    points: Vec<ProjPoint>,
}

impl Orbit {
    pub fn map(&self) -> &MoebiusMap {
        &self.map
    }

    pub fn field(&self) -> &FieldSpec {
        self.map.field()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains_infinity(&self) -> bool {
        self.points.iter().any(ProjPoint::is_infinity)
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.contains(p)
    }

    /// Rotates the cycle so it starts at `start`, which must be a member.
    pub fn starting_at(&self, start: &ProjPoint) -> Option<Orbit> {
        let i = self.points.iter().position(|p| p == start)?;
        let mut points = self.points.clone();
        points.rotate_left(i);
        Some(Orbit {
            map: self.map.clone(),
            points,
        })
    }

    /// Finite points in orbit order.
    pub fn finite_points(&self) -> Vec<FieldElement> {
        self.points
            .iter()
            .filter_map(|p| p.finite().cloned())
            .collect()
    }
}

impl fmt::Debug for Orbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.points).finish()
    }
}

pub fn orbit_of(map: &MoebiusMap, alpha: &ProjPoint) -> Orbit {
    let mut points = vec![alpha.clone()];
    let mut z = map.apply(alpha);
    while &z != alpha {
        points.push(z.clone());
        z = map.apply(&z);
        assert!(
            points.len() <= map.field().size() as usize + 1,
            "orbit longer than the projective line"
        );
    }
    Orbit {
        map: map.clone(),
        points,
    }
}

/// Splits the projective line over the map's field into orbits, each
/// starting at its smallest point, sorted by that point (∞ last).
pub fn partition(map: &MoebiusMap) -> Result<Vec<Orbit>> {
    if map.frob() != 0 {
        return Err(Error::Unsupported(
            "orbit partitions need a map without Frobenius twist".into(),
        ));
    }
    if map.c().is_zero() {
        return Err(Error::Unsupported("maps with c = 0 are not treated".into()));
    }
    if map.trace().is_zero() {
        return Err(Error::ExcludedOrderTwo);
    }
    Ok(partition_unchecked(map))
}

pub(crate) fn partition_unchecked(map: &MoebiusMap) -> Vec<Orbit> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for p in ProjPoint::all(map.field()) {
        if seen.contains(&p) {
            continue;
        }
        // points are visited in ascending order, so p is the orbit minimum
        let orbit = orbit_of(map, &p);
        seen.extend(orbit.points().iter().cloned());
        out.push(orbit);
    }
    out
}
