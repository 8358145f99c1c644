//! Dense univariate polynomials over a GF(2^m), including GF(2) itself.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2m::{FieldElement, FieldSpec, TowerEmbedding};
use crate::projline::{Orbit, ProjPoint};

/// Coefficients are stored lowest degree first as raw coordinate bits of
/// `field`; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

impl Polynomial {
    pub fn from_bits(field: &FieldSpec, mut coeffs: Vec<u32>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|&&c| c >> field.m() != 0) {
            return Err(Error::InvalidArgument(format!(
                "coefficient 0b{bad:b} is not an element of {field:?}"
            )));
        }
        trim(&mut coeffs);
        Ok(Polynomial {
            field: field.clone(),
            coeffs,
        })
    }

    fn raw(field: &FieldSpec, mut coeffs: Vec<u32>) -> Self {
        trim(&mut coeffs);
        Polynomial {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_elements(field: &FieldSpec, coeffs: &[FieldElement]) -> Result<Self> {
        for c in coeffs {
            field.ensure_same(c.field())?;
        }
        Ok(Self::raw(field, coeffs.iter().map(|c| c.bits()).collect()))
    }

    /// GF(2) polynomial from a bit mask, bit i = coefficient of x^i.
    pub fn from_mask(mask: u128) -> Self {
        let coeffs = (0..128).map(|i| (mask >> i & 1) as u32).collect();
        Self::raw(&FieldSpec::gf2(), coeffs)
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Self::raw(field, Vec::new())
    }

    pub fn one(field: &FieldSpec) -> Self {
        Self::raw(field, vec![1])
    }

    pub fn constant(c: &FieldElement) -> Self {
        Self::raw(c.field(), vec![c.bits()])
    }

    /// c·x^k
    pub fn monomial(c: &FieldElement, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c.bits();
        Self::raw(c.field(), coeffs)
    }

    /// x + β
    pub fn linear(beta: &FieldElement) -> Self {
        Self::raw(beta.field(), vec![beta.bits(), 1])
    }

    /// x^n + 1 over GF(2).
    pub fn xn_minus_one(n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[0] = 1;
        coeffs[n] = 1;
        Self::raw(&FieldSpec::gf2(), coeffs)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_gf2(&self) -> bool {
        self.field.m() == 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        let bits = self.coeffs.get(i).copied().unwrap_or(0);
        self.field
            .element(bits)
            .expect("stored coefficients are in range")
    }

    pub fn coeffs(&self) -> Vec<FieldElement> {
        (0..self.coeffs.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn coeff_bits(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.degree().map(|d| self.coeff(d))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Bit mask of a GF(2) polynomial of degree < 128.
    pub fn to_mask(&self) -> Option<u128> {
        if !self.is_gf2() || self.coeffs.len() > 128 {
            return None;
        }
        Some(
            self.coeffs
                .iter()
                .enumerate()
                .fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i)),
        )
    }

    pub fn checked_add(&self, rhs: &Polynomial) -> Result<Polynomial> {
        self.field.ensure_same(&rhs.field)?;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(0) ^ rhs.coeffs.get(i).copied().unwrap_or(0)
            })
            .collect();
        Ok(Self::raw(&self.field, coeffs))
    }

    pub fn checked_mul(&self, rhs: &Polynomial) -> Result<Polynomial> {
        self.field.ensure_same(&rhs.field)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] ^= f.mul_raw(a, b);
            }
        }
        Ok(Self::raw(f, out))
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Polynomial> {
        self.field.ensure_same(c.field())?;
        let f = &self.field;
        Ok(Self::raw(
            f,
            self.coeffs
                .iter()
                .map(|&a| f.mul_raw(a, c.bits()))
                .collect(),
        ))
    }

    /// Returns (quotient, remainder) with deg r < deg b.
    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.field.ensure_same(&divisor.field)?;
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        let lead_inv = f
            .inv_raw(divisor.coeffs[db])
            .expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let top = rem[i];
            if top == 0 {
                continue;
            }
            let q = f.mul_raw(top, lead_inv);
            quot[i - db] = q;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i - db + j] ^= f.mul_raw(q, b);
            }
        }
        rem.truncate(db);
        Ok((Self::raw(f, quot), Self::raw(f, rem)))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Whether `divisor` divides `self`.
    pub fn is_divisible_by(&self, divisor: &Polynomial) -> Result<bool> {
        Ok(self.rem(divisor)?.is_zero())
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Squares coefficient-wise and doubles exponents.
    pub fn square(&self) -> Polynomial {
        let f = &self.field;
        let mut out = vec![0u32; (2 * self.coeffs.len()).saturating_sub(1)];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[2 * i] = f.mul_raw(a, a);
        }
        Self::raw(f, out)
    }

    /// Applies x ↦ x^(2^j) to every coefficient, keeping exponents.
    pub fn frobenius_coeffs(&self, j: u32) -> Polynomial {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| f.element(a).unwrap().frobenius(j).bits())
            .collect();
        Self::raw(f, coeffs)
    }

    pub fn monic(&self) -> Result<Polynomial> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?;
        self.scale(&lead.inv()?)
    }

    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial> {
        self.field.ensure_same(&other.field)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::InvalidArgument("gcd(0, 0) is undefined".into()));
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic least common multiple; zero if either operand is zero.
    pub fn lcm(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.is_zero() || other.is_zero() {
            self.field.ensure_same(&other.field)?;
            return Ok(Self::zero(&self.field));
        }
        let g = self.gcd(other)?;
        let (q, _) = self.checked_mul(other)?.divmod(&g)?;
        q.monic()
    }

    /// Horner evaluation at a point of the same field.
    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement> {
        self.field.ensure_same(x.field())?;
        Ok(self.eval_unchecked(x))
    }

    /// Evaluates a GF(2) polynomial at an element of any field.
    pub fn eval_lifted(&self, x: &FieldElement) -> Result<FieldElement> {
        if self.is_gf2() || self.field == *x.field() {
            Ok(self.eval_unchecked(x))
        } else {
            Err(Error::FieldMismatch {
                left: format!("{:?}", self.field),
                right: format!("{:?}", x.field()),
            })
        }
    }

    fn eval_unchecked(&self, x: &FieldElement) -> FieldElement {
        let f = x.field();
        let acc = self
            .coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| f.mul_raw(acc, x.bits()) ^ c);
        f.element(acc).unwrap()
    }

    /// Re-reads a GF(2) polynomial over `field`.
    pub fn lift(&self, field: &FieldSpec) -> Result<Polynomial> {
        if &self.field == field {
            return Ok(self.clone());
        }
        if !self.is_gf2() {
            return Err(Error::FieldMismatch {
                left: format!("{:?}", self.field),
                right: format!("{field:?}"),
            });
        }
        Ok(Self::raw(field, self.coeffs.clone()))
    }

    /// Pushes coefficients through a tower embedding.
    pub fn embed(&self, tower: &TowerEmbedding) -> Result<Polynomial> {
        let coeffs = self
            .coeffs()
            .iter()
            .map(|c| tower.embed(c).map(|e| e.bits()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::raw(tower.ext(), coeffs))
    }

    /// Reads a polynomial with all coefficients in {0, 1} as one over GF(2).
    pub fn to_gf2(&self) -> Option<Polynomial> {
        self.coeffs
            .iter()
            .all(|&c| c <= 1)
            .then(|| Self::raw(&FieldSpec::gf2(), self.coeffs.clone()))
    }

    /// x^deg · p(1/x)
    pub fn reciprocal(&self) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::raw(&self.field, coeffs)
    }

    /// `0x..` mask form; GF(2) only.
    pub fn to_hex(&self) -> Option<String> {
        if !self.is_gf2() {
            return None;
        }
        if self.is_zero() {
            return Some("0x0".into());
        }
        let mut digits = String::new();
        for chunk in (0..self.coeffs.len()).step_by(4) {
            let nibble = (0..4).fold(0u32, |acc, k| {
                acc | (self.coeffs.get(chunk + k).copied().unwrap_or(0) << k)
            });
            digits.push(char::from_digit(nibble, 16).unwrap());
        }
        Some(format!("0x{}", digits.chars().rev().collect::<String>()))
    }

    /// `x^6+x^4+x^3+x+1` for GF(2), `[c0, c1, ...]` element literals otherwise.
    pub fn to_human(&self) -> String {
        if self.is_gf2() {
            if self.is_zero() {
                return "0".into();
            }
            let terms: Vec<String> = (0..self.coeffs.len())
                .rev()
                .filter(|&i| self.coeffs[i] == 1)
                .map(|i| match i {
                    0 => "1".to_string(),
                    1 => "x".to_string(),
                    _ => format!("x^{i}"),
                })
                .collect();
            terms.join("+")
        } else {
            let lits: Vec<String> = self.coeffs().iter().map(|c| c.to_string()).collect();
            format!("[{}]", lits.join(", "))
        }
    }

    /// Parses a GF(2) polynomial given as `0x..` or as a sum of `x^k` terms.
    pub fn parse_gf2(text: &str) -> Result<Polynomial> {
        let text = text.trim();
        if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
            let mut coeffs = Vec::new();
            for ch in hex.chars().rev() {
                let nibble = ch
                    .to_digit(16)
                    .ok_or_else(|| Error::Parse(format!("bad hex polynomial '{text}'")))?;
                coeffs.extend((0..4).map(|k| nibble >> k & 1));
            }
            return Ok(Self::raw(&FieldSpec::gf2(), coeffs));
        }
        let mut coeffs: Vec<u32> = Vec::new();
        for term in text.split('+').map(str::trim) {
            let e: usize = match term {
                "0" => continue,
                "1" => 0,
                "x" => 1,
                t => t
                    .strip_prefix("x^")
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad polynomial term '{t}'")))?,
            };
            if coeffs.len() <= e {
                coeffs.resize(e + 1, 0);
            }
            coeffs[e] ^= 1;
        }
        Ok(Self::raw(&FieldSpec::gf2(), coeffs))
    }

    /// Parses `[c0, c1, ...]` (lowest degree first) over `field`; GF(2)
    /// fields also accept the mask and `x^k` forms.
    pub fn parse_over(field: &FieldSpec, text: &str) -> Result<Polynomial> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let coeffs = inner
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|lit| field.parse_element(lit).map(|e| e.bits()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::raw(field, coeffs));
        }
        Self::parse_gf2(text)?.lift(field)
    }
}

fn trim(coeffs: &mut Vec<u32>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.m(), self.field.poly())
            .cmp(&(other.field.m(), other.field.poly()))
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_human())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_human())
    }
}

impl std::ops::Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl std::ops::Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

/// Frobenius conjugates β, β², β⁴, ... up to the first repeat.
pub fn conjugates(beta: &FieldElement) -> Vec<FieldElement> {
    let mut out = vec![beta.clone()];
    let mut y = beta.square();
    while &y != beta {
        out.push(y.clone());
        y = y.square();
    }
    out
}

/// ∏ (x + β^(2^i)) over the conjugates of β, read back over GF(2).
pub fn minimal_polynomial_gf2(beta: &FieldElement) -> Polynomial {
    let field = beta.field();
    let mut acc = Polynomial::one(field);
    for c in conjugates(beta) {
        acc = &acc * &Polynomial::linear(&c);
    }
    acc.to_gf2()
        .expect("a product over a full conjugate class has binary coefficients")
}

/// ∏ (x + ζ) over the points of an affine orbit.
pub fn orbit_polynomial(orbit: &Orbit) -> Result<Polynomial> {
    let field = orbit.field();
    let mut acc = Polynomial::one(field);
    for p in orbit.points() {
        match p {
            ProjPoint::Finite(z) => acc = &acc * &Polynomial::linear(z),
            ProjPoint::Infinity => {
                return Err(Error::InvalidArgument(
                    "orbit polynomial is only defined for orbits without inf".into(),
                ))
            }
        }
    }
    Ok(acc)
}

/// Multiplicative order of 2 modulo odd n.
pub fn ord2_mod(n: u64) -> u32 {
    if n == 1 {
        return 1;
    }
    let mut k = 1;
    let mut x = 2 % n;
    while x != 1 {
        x = x * 2 % n;
        k += 1;
    }
    k
}

/// The 2-cyclotomic cosets modulo n, each listed from its smallest member.
pub fn cyclotomic_cosets(n: u64) -> Vec<Vec<u64>> {
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut x = s;
        while !seen[x as usize] {
            seen[x as usize] = true;
            coset.push(x);
            x = x * 2 % n;
        }
        out.push(coset);
    }
    out
}

/// Irreducible factors of x^n − 1 over GF(2), one per cyclotomic coset,
/// as (smallest coset member, minimal polynomial of ζ^rep) for a primitive
/// n-th root ζ. The factor set does not depend on which ζ is chosen.
pub fn factor_xn_minus_1_gf2(n: u64) -> Result<Vec<(u64, Polynomial)>> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "x^n - 1 factorisation needs odd n, got {n}"
        )));
    }
    let m = ord2_mod(n);
    if m > crate::gf2m::MAX_DEGREE {
        return Err(Error::Unsupported(format!(
            "n = {n} needs GF(2^{m}) for its roots of unity"
        )));
    }
    let field = FieldSpec::new(m, None)?;
    let zeta = field.from_log((field.group_order() as u64 / n) as i64);
    Ok(cyclotomic_cosets(n)
        .into_iter()
        .map(|coset| {
            let rep = coset[0];
            let beta = zeta.pow(rep as i64).expect("nonzero");
            (rep, minimal_polynomial_gf2(&beta))
        })
        .collect())
}
