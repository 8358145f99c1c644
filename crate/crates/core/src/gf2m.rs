//! Arithmetic in the binary extension fields GF(2^m), 1 <= m <= 16.
//!
//! Elements are m-bit coordinate vectors in the polynomial basis
//! `{1, x, ..., x^(m-1)}` modulo the defining polynomial; bit `i` is the
//! coefficient of `x^i`. Multiplication, inversion and powering go through
//! exp/log tables built against the field's fixed primitive element, which
//! is also the base of the `g^k` literal syntax.
//!
//! ```
//! use goppa_cyclic::gf2m::FieldSpec;
//!
//! let f = FieldSpec::new(4, Some(0x13)).unwrap();
//! let g = f.generator();
//! assert_eq!(g.pow(15).unwrap(), f.one());
//! assert_eq!(g.pow(5).unwrap() * g.pow(12).unwrap(), g.pow(2).unwrap());
//! ```

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 16;

/// One primitive defining polynomial per degree, index = degree.
///
/// Degrees 4, 6 and 8 use x^4+x+1, x^6+x^4+x^3+x+1 and x^8+x^4+x^3+x^2+1.
pub const DEFAULT_POLYS: [u32; 17] = [
    0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x5b, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b, 0x4443,
    0x8003, 0x1100b,
];

struct Inner {
    m: u32,
    poly: u32,
    generator: u32,
    /// 2^m - 1
    order: u32,
    /// exp[i] = generator^i for i < 2 * order
    exp: Vec<u32>,
    /// log[x] for x != 0; log[0] is unused
    log: Vec<u32>,
}

/// A validated GF(2^m): degree, defining polynomial and primitive element.
///
/// Cheap to clone; all clones share one set of tables.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.m == other.0.m && self.0.poly == other.0.poly)
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.m.hash(state);
        self.0.poly.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}, {:#x})", self.0.m, self.0.poly)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gf2m m={} poly={:#x} gen=0b{:0width$b}",
            self.0.m,
            self.0.poly,
            self.0.generator,
            width = self.0.m as usize
        )
    }
}

fn degree_of(p: u32) -> u32 {
    31 - p.leading_zeros()
}

/// Carry-less multiply of two GF(2) polynomials held in u32 masks.
fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let a = a as u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn rem_gf2(mut a: u64, modulus: u32) -> u32 {
    let dm = degree_of(modulus);
    let m = modulus as u64;
    while a != 0 && (63 - a.leading_zeros()) >= dm {
        let shift = (63 - a.leading_zeros()) - dm;
        a ^= m << shift;
    }
    a as u32
}

fn mul_mod(a: u32, b: u32, poly: u32) -> u32 {
    rem_gf2(clmul(a, b), poly)
}

fn pow_mod(mut base: u32, mut e: u64, poly: u32) -> u32 {
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, poly);
        }
        base = mul_mod(base, base, poly);
        e >>= 1;
    }
    acc
}

/// Smallest nontrivial divisor of a GF(2) polynomial, if any.
pub fn smallest_factor(poly: u32) -> Option<u32> {
    let d = degree_of(poly);
    if d <= 1 {
        return None;
    }
    let max = 1u32 << (d / 2 + 1);
    (2..max).find(|&cand| {
        let dc = degree_of(cand);
        dc >= 1 && dc <= d / 2 && rem_gf2(poly as u64, cand) == 0
    })
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn has_full_order(x: u32, m: u32, poly: u32) -> bool {
    let order = (1u64 << m) - 1;
    if x == 0 || pow_mod(x, order, poly) != 1 {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|p| pow_mod(x, order / p, poly) != 1)
}

impl FieldSpec {
    /// Builds GF(2^m). `None` selects the built-in primitive polynomial for
    /// degree `m`; the primitive element is the smallest one in bit order.
    pub fn new(m: u32, poly: Option<u32>) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&m) {
            return Err(Error::InvalidDegree(m));
        }
        let poly = poly.unwrap_or(DEFAULT_POLYS[m as usize]);
        Self::check_poly(m, poly)?;
        let size = 1u32 << m;
        let generator = (1..size)
            .find(|&x| has_full_order(x, m, poly))
            .expect("an irreducible polynomial always admits a primitive element");
        Ok(Self::build(m, poly, generator))
    }

    /// Builds GF(2^m) with an explicitly chosen primitive element.
    pub fn with_generator(m: u32, poly: u32, generator: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&m) {
            return Err(Error::InvalidDegree(m));
        }
        Self::check_poly(m, poly)?;
        if generator >> m != 0 || !has_full_order(generator, m, poly) {
            return Err(Error::NotPrimitive {
                element: format!("0b{generator:b}"),
                expected: (1u64 << m) - 1,
            });
        }
        Ok(Self::build(m, poly, generator))
    }

    /// The prime field GF(2), shared.
    pub fn gf2() -> Self {
        static GF2: OnceLock<FieldSpec> = OnceLock::new();
        GF2.get_or_init(|| Self::build(1, 0x3, 1)).clone()
    }

    fn check_poly(m: u32, poly: u32) -> Result<()> {
        if poly == 0 || degree_of(poly) != m {
            return Err(Error::NotMonic { poly, m });
        }
        if let Some(factor) = smallest_factor(poly) {
            return Err(Error::Reducible { poly, factor });
        }
        Ok(())
    }

    fn build(m: u32, poly: u32, generator: u32) -> Self {
        let order = (1u32 << m) - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; 1usize << m];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x;
            exp[(i + order) as usize] = x;
            log[x as usize] = i;
            x = mul_mod(x, generator, poly);
        }
        FieldSpec(Arc::new(Inner {
            m,
            poly,
            generator,
            order,
            exp,
            log,
        }))
    }

    /// Parses `gf2m m=<int> poly=0x<hex> gen=<literal>`; `poly` and `gen` are
    /// optional. A `g^k` generator literal is read as a power of `x`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        if tokens.next() != Some("gf2m") {
            return Err(Error::Parse(format!(
                "field spec must start with 'gf2m': {text}"
            )));
        }
        let mut m = None;
        let mut poly = None;
        let mut gen = None;
        for tok in tokens.flat_map(|t| t.split(',')) {
            if tok.is_empty() {
                continue;
            }
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{tok}'")))?;
            match key {
                "m" => m = Some(parse_u32(value)?),
                "poly" => poly = Some(parse_u32(value)?),
                "gen" => gen = Some(value.to_string()),
                _ => return Err(Error::Parse(format!("unknown field key '{key}'"))),
            }
        }
        let m = m.ok_or_else(|| Error::Parse("field spec is missing m=".into()))?;
        let field = Self::new(m, poly)?;
        match gen {
            None => Ok(field),
            Some(lit) => {
                let poly = field.poly();
                let bits = match lit.strip_prefix("g^") {
                    Some(k) => {
                        let k: i64 = k
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent in '{lit}'")))?;
                        // reduction mod poly also covers m = 1, where x = 1
                        pow_mod(2, k.rem_euclid(field.group_order() as i64) as u64, poly)
                    }
                    None => field.parse_element(&lit)?.bits(),
                };
                Self::with_generator(m, poly, bits)
            }
        }
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    pub fn poly(&self) -> u32 {
        self.0.poly
    }

    /// Number of field elements, 2^m.
    pub fn size(&self) -> u32 {
        1 << self.0.m
    }

    /// Order of the multiplicative group, 2^m - 1.
    pub fn group_order(&self) -> u32 {
        self.0.order
    }

    pub fn is_default_poly(&self) -> bool {
        DEFAULT_POLYS[self.0.m as usize] == self.0.poly
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_parts(self.clone(), 0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_parts(self.clone(), 1)
    }

    pub fn generator(&self) -> FieldElement {
        FieldElement::from_parts(self.clone(), self.0.generator)
    }

    /// The element with the given coordinate bits.
    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        if bits >> self.0.m != 0 {
            return Err(Error::InvalidArgument(format!(
                "0b{bits:b} has more than {} coordinates",
                self.0.m
            )));
        }
        Ok(FieldElement::from_parts(self.clone(), bits))
    }

    /// generator^k, k taken modulo the group order.
    pub fn from_log(&self, k: i64) -> FieldElement {
        let e = k.rem_euclid(self.0.order as i64) as usize;
        FieldElement::from_parts(self.clone(), self.0.exp[e])
    }

    /// All elements in coordinate order 0, 1, 2, ...
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size()).map(move |b| FieldElement::from_parts(self.clone(), b))
    }

    /// Parses `0`, `1`, `g^<k>` or `0b<bits>`.
    pub fn parse_element(&self, lit: &str) -> Result<FieldElement> {
        let lit = lit.trim();
        match lit {
            "0" => return Ok(self.zero()),
            "1" => return Ok(self.one()),
            "g" => return Ok(self.generator()),
            _ => {}
        }
        if let Some(k) = lit.strip_prefix("g^") {
            let k: i64 = k
                .trim_matches(|c| c == '(' || c == ')')
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in '{lit}'")))?;
            return Ok(self.from_log(k));
        }
        if let Some(bits) = lit.strip_prefix("0b") {
            let bits = u32::from_str_radix(bits, 2)
                .map_err(|_| Error::Parse(format!("bad coordinate literal '{lit}'")))?;
            return self.element(bits);
        }
        Err(Error::Parse(format!(
            "unrecognised element literal '{lit}'"
        )))
    }

    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = self.0.log[a as usize] + self.0.log[b as usize];
        self.0.exp[i as usize]
    }

    pub(crate) fn inv_raw(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let l = self.0.log[a as usize];
        Some(self.0.exp[((self.0.order - l) % self.0.order) as usize])
    }

    pub(crate) fn pow_raw(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.0.log[a as usize] as u64;
        self.0.exp[((l * (e % self.0.order as u64)) % self.0.order as u64) as usize]
    }

    pub(crate) fn log_raw(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.0.log[a as usize])
    }

    pub(crate) fn ensure_same(&self, other: &FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: format!("{self:?}"),
                right: format!("{other:?}"),
            })
        }
    }
}

fn parse_u32(value: &str) -> Result<u32> {
    let parsed = if let Some(hex) = value
        .strip_prefix("0x")
        .or_else(|| value.strip_prefix("0X"))
    {
        u32::from_str_radix(hex, 16)
    } else if let Some(bin) = value.strip_prefix("0b") {
        u32::from_str_radix(bin, 2)
    } else {
        value.parse()
    };
    parsed.map_err(|_| Error::Parse(format!("bad integer '{value}'")))
}

/// An element of a specific GF(2^m).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldSpec,
    bits: u32,
}

impl FieldElement {
    pub(crate) fn from_parts(field: FieldSpec, bits: u32) -> Self {
        FieldElement { field, bits }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_one(&self) -> bool {
        self.bits == 1
    }

    /// Discrete logarithm to the field's generator.
    pub fn log(&self) -> Option<u32> {
        self.field.log_raw(self.bits)
    }

    pub fn checked_add(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.field.ensure_same(&rhs.field)?;
        Ok(self.with_bits(self.field.add_raw(self.bits, rhs.bits)))
    }

    pub fn checked_mul(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.field.ensure_same(&rhs.field)?;
        Ok(self.with_bits(self.field.mul_raw(self.bits, rhs.bits)))
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.field.ensure_same(&rhs.field)?;
        let inv = rhs.inv()?;
        Ok(self.with_bits(self.field.mul_raw(self.bits, inv.bits)))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        self.field
            .inv_raw(self.bits)
            .map(|b| self.with_bits(b))
            .ok_or(Error::DivisionByZero)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        if e >= 0 {
            return Ok(self.with_bits(self.field.pow_raw(self.bits, e as u64)));
        }
        let inv = self.inv()?;
        Ok(self.with_bits(self.field.pow_raw(inv.bits, e.unsigned_abs())))
    }

    pub fn square(&self) -> FieldElement {
        self.with_bits(self.field.mul_raw(self.bits, self.bits))
    }

    /// The unique square root, x^(2^(m-1)).
    pub fn sqrt(&self) -> FieldElement {
        let mut y = self.clone();
        for _ in 1..self.field.m() {
            y = y.square();
        }
        y
    }

    /// x^(2^j)
    pub fn frobenius(&self, j: u32) -> FieldElement {
        let mut y = self.clone();
        for _ in 0..j {
            y = y.square();
        }
        y
    }

    /// Multiplicative order; `None` for zero.
    pub fn multiplicative_order(&self) -> Option<u64> {
        let l = self.log()? as u64;
        let n = self.field.group_order() as u64;
        Some(n / gcd_u64(l, n))
    }

    fn with_bits(&self, bits: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            bits,
        }
    }
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bits.cmp(&other.bits)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bits {
            0 => write!(f, "0"),
            1 => write!(f, "1"),
            b => write!(f, "g^{}", self.field.log_raw(b).unwrap_or_default()),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field mismatch")
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("field mismatch")
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$checked(rhs).expect("field mismatch")
            }
        }
    };
}

impl_binop!(Add, add, checked_add);
impl_binop!(Sub, sub, checked_add);
impl_binop!(Mul, mul, checked_mul);

/// GF(2^l) inside GF(2^(2l)).
#[derive(Clone, Debug)]
pub struct TowerEmbedding {
    base: FieldSpec,
    ext: FieldSpec,
    /// (2^(2l) - 1) / (2^l - 1) = 2^l + 1
    stride: u64,
    image_of_base_generator: FieldElement,
}

impl TowerEmbedding {
    /// Builds the quadratic extension of `base` on the default polynomial of
    /// degree 2l. The extension's primitive element γ is the smallest one for
    /// which γ^(2^l + 1) has the same minimal polynomial as the base generator,
    /// so that `g^k ↦ γ^((2^l + 1) k)` is a field embedding.
    pub fn new(base: &FieldSpec) -> Result<Self> {
        let l = base.m();
        if 2 * l > MAX_DEGREE {
            return Err(Error::Unsupported(format!(
                "quadratic extension of GF(2^{l}) exceeds GF(2^{MAX_DEGREE})"
            )));
        }
        Self::with_ext_poly(base, DEFAULT_POLYS[(2 * l) as usize])
    }

    pub fn with_ext_poly(base: &FieldSpec, ext_poly: u32) -> Result<Self> {
        let l = base.m();
        let em = 2 * l;
        if em > MAX_DEGREE {
            return Err(Error::InvalidDegree(em));
        }
        FieldSpec::check_poly(em, ext_poly)?;
        let target = minimal_polynomial_mask(&base.generator());
        let stride = (1u64 << l) + 1;
        let size = 1u32 << em;
        let gamma = (2..size)
            .find(|&x| {
                has_full_order(x, em, ext_poly)
                    && eval_mask(target, pow_mod(x, stride, ext_poly), ext_poly) == 0
            })
            .ok_or_else(|| Error::Unsupported("no compatible extension generator".into()))?;
        let ext = FieldSpec::build(em, ext_poly, gamma);
        let image = ext.from_log(stride as i64);
        Ok(TowerEmbedding {
            base: base.clone(),
            ext,
            stride,
            image_of_base_generator: image,
        })
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn ext(&self) -> &FieldSpec {
        &self.ext
    }

    pub fn image_of_base_generator(&self) -> &FieldElement {
        &self.image_of_base_generator
    }

    pub fn embed(&self, x: &FieldElement) -> Result<FieldElement> {
        self.base.ensure_same(x.field())?;
        Ok(match x.log() {
            None => self.ext.zero(),
            Some(k) => self.ext.from_log((k as u64 * self.stride) as i64),
        })
    }

    /// Pulls an extension element back into the base field, if it lies there.
    pub fn preimage(&self, y: &FieldElement) -> Result<Option<FieldElement>> {
        self.ext.ensure_same(y.field())?;
        Ok(match y.log() {
            None => Some(self.base.zero()),
            Some(k) if (k as u64).is_multiple_of(self.stride) => {
                Some(self.base.from_log((k as u64 / self.stride) as i64))
            }
            Some(_) => None,
        })
    }
}

/// Minimal polynomial over GF(2) of `x` as a bit mask.
fn minimal_polynomial_mask(x: &FieldElement) -> u32 {
    let f = x.field();
    let mut conj = vec![x.bits()];
    let mut y = f.mul_raw(x.bits(), x.bits());
    while y != x.bits() {
        conj.push(y);
        y = f.mul_raw(y, y);
    }
    // coefficients in the field, then read off as bits
    let mut coeffs = vec![1u32];
    for c in conj {
        let mut next = vec![0u32; coeffs.len() + 1];
        for (i, &a) in coeffs.iter().enumerate() {
            next[i + 1] ^= a;
            next[i] ^= f.mul_raw(a, c);
        }
        coeffs = next;
    }
    coeffs
        .iter()
        .enumerate()
        .fold(0u32, |acc, (i, &c)| acc | ((c & 1) << i))
}

fn eval_mask(mask: u32, x: u32, poly: u32) -> u32 {
    let mut acc = 0u32;
    for i in (0..=degree_of(mask.max(1))).rev() {
        acc = mul_mod(acc, x, poly);
        if mask >> i & 1 == 1 {
            acc ^= 1;
        }
    }
    acc
}

/// Both roots of λ² + tλ + 1, found by exhaustive scan of the extension.
#[derive(Clone, Debug)]
pub struct QuadraticRoots {
    /// Root with the smaller discrete log in the field that holds both roots.
    pub rho: FieldElement,
    pub rho_inv: FieldElement,
    /// Both roots lie in the image of the base field.
    pub reducible: bool,
}

pub fn solve_unit_quadratic(t: &FieldElement, tower: &TowerEmbedding) -> Result<QuadraticRoots> {
    tower.base().ensure_same(t.field())?;
    if t.is_zero() {
        return Err(Error::ExcludedOrderTwo);
    }
    let ext = tower.ext();
    let te = tower.embed(t)?.bits();
    let roots: Vec<u32> = (1..ext.size())
        .filter(|&x| ext.mul_raw(x, x) ^ ext.mul_raw(te, x) ^ 1 == 0)
        .collect();
    debug_assert_eq!(roots.len(), 2, "t != 0 gives two distinct roots");
    let a = FieldElement::from_parts(ext.clone(), roots[0]);
    let b = FieldElement::from_parts(ext.clone(), roots[1]);
    let pa = tower.preimage(&a)?;
    let pb = tower.preimage(&b)?;
    let reducible = pa.is_some() && pb.is_some();
    let a_first = match (pa, pb) {
        (Some(x), Some(y)) => x.log() < y.log(),
        _ => a.log() < b.log(),
    };
    let (rho, rho_inv) = if a_first { (a, b) } else { (b, a) };
    Ok(QuadraticRoots {
        rho,
        rho_inv,
        reducible,
    })
}
