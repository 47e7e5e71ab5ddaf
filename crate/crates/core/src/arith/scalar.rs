use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::radical::{coprime_base, square_free_split};
use super::ArithError;

/// Upper bound on independent square-root generators handled by
/// [`ExactScalar::inverse`]. Inversion multiplies through `2^g` conjugates.
pub const MAX_INVERSE_GENERATORS: usize = 8;

/// Map from square-free radicand to its (non-zero) rational coefficient.
/// Radicand `1` carries the rational part.
type Component = BTreeMap<BigUint, BigRational>;

/// An exact complex number whose real and imaginary parts are ℚ-linear
/// combinations of square roots of square-free positive integers.
///
/// The representation is canonical: no zero coefficients are stored, so
/// structural equality is numeric equality and zero is the empty scalar.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    re: Component,
    im: Component,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        let mut im = Component::new();
        im.insert(BigUint::one(), BigRational::one());
        Self {
            re: Component::new(),
            im,
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut re = Component::new();
        if !q.is_zero() {
            re.insert(BigUint::one(), q);
        }
        Self {
            re,
            im: Component::new(),
        }
    }

    /// `num/den` as an exact rational. Panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `√n`, reduced so the stored radicand is square-free (`√8 = 2√2`).
    pub fn sqrt(n: u64) -> Self {
        let (outer, radicand) = square_free_split(n);
        Self::surd(BigRational::from_integer(BigInt::from(outer)), radicand)
    }

    /// `coeff · √radicand` for a radicand that is already square-free.
    fn surd(coeff: BigRational, radicand: u64) -> Self {
        let mut re = Component::new();
        if !coeff.is_zero() {
            re.insert(BigUint::from(radicand), coeff);
        }
        Self {
            re,
            im: Component::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_empty() && self.im.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_empty() && self.re.len() == 1 && self.re.get(&BigUint::one()).is_some_and(|c| c.is_one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_empty()
    }

    pub fn real_part(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: Component::new(),
        }
    }

    pub fn imag_part(&self) -> Self {
        Self {
            re: self.im.clone(),
            im: Component::new(),
        }
    }

    /// Real-part coefficients keyed by radicand.
    pub fn real_terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.re.iter()
    }

    /// Imaginary-part coefficients keyed by radicand.
    pub fn imag_terms(&self) -> impl Iterator<Item = (&BigUint, &BigRational)> {
        self.im.iter()
    }

    /// Number of stored monomials across both parts.
    pub fn monomial_count(&self) -> usize {
        self.re.len() + self.im.len()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: negate(&self.im),
        }
    }

    /// `|a|² = a · conj(a)`; always real.
    pub fn norm_sq(&self) -> Self {
        let re = add_components(&mul_components(&self.re, &self.re), &mul_components(&self.im, &self.im));
        Self {
            re,
            im: Component::new(),
        }
    }

    /// Multiplicative inverse by conjugate elimination.
    ///
    /// The complex part is cleared with `conj(a)/|a|²`. The real
    /// denominator is then rationalized one square-root generator at a
    /// time over a pairwise coprime base of its radicands.
    pub fn inverse(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if self.im.is_empty() {
            return Ok(Self {
                re: invert_real(&self.re)?,
                im: Component::new(),
            });
        }
        let inv_norm = Self {
            re: invert_real(&self.norm_sq().re)?,
            im: Component::new(),
        };
        Ok(&self.conj() * &inv_norm)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(self * &rhs.inverse()?)
    }

    /// Floating-point approximation `(re, im)`. Informational only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        (approx_component(&self.re), approx_component(&self.im))
    }

    /// Whether the leading monomial (lowest real radicand, else lowest
    /// imaginary radicand) is negative. Zero is non-negative.
    pub fn leading_negative(&self) -> bool {
        self.re
            .values()
            .next()
            .or_else(|| self.im.values().next())
            .is_some_and(|c| c.is_negative())
    }

    /// Text for the magnitude part of a coefficient: a bare monomial or a
    /// parenthesized sum. The caller prints the sign.
    fn body(&self) -> String {
        let monos: Vec<(bool, String)> = self
            .re
            .iter()
            .map(|(k, c)| (c.is_negative(), monomial(k, &c.abs(), false)))
            .chain(
                self.im
                    .iter()
                    .map(|(k, c)| (c.is_negative(), monomial(k, &c.abs(), true))),
            )
            .collect();
        if monos.len() == 1 {
            return monos.into_iter().next().unwrap().1;
        }
        let mut out = String::from("(");
        for (idx, (neg, text)) in monos.iter().enumerate() {
            if *neg {
                out.push('-');
            } else if idx > 0 {
                out.push('+');
            }
            out.push_str(text);
        }
        out.push(')');
        out
    }

    /// Splits into `(negative, magnitude_text)` where `magnitude_text`
    /// parses back to `±self` under the state grammar. An empty text means
    /// the magnitude is exactly one.
    pub fn coefficient_text(&self) -> (bool, String) {
        let neg = self.leading_negative();
        let mag = if neg { -self } else { self.clone() };
        if mag.is_one() {
            (neg, String::new())
        } else {
            (neg, mag.body())
        }
    }
}

fn monomial(radicand: &BigUint, coeff: &BigRational, imag: bool) -> String {
    let mut factors: Vec<String> = Vec::new();
    let numer = coeff.numer();
    let rational_only = radicand.is_one() && !imag;
    if !numer.is_one() || rational_only {
        factors.push(numer.to_string());
    }
    if !radicand.is_one() {
        factors.push(format!("sqrt({radicand})"));
    }
    if imag {
        factors.push("i".to_string());
    }
    let mut text = factors.join("*");
    if !coeff.denom().is_one() {
        text.push('/');
        text.push_str(&coeff.denom().to_string());
    }
    text
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let (neg, text) = self.coefficient_text();
        let text = if text.is_empty() { "1".to_string() } else { text };
        if neg {
            write!(f, "-{text}")
        } else {
            f.write_str(&text)
        }
    }
}

fn approx_component(c: &Component) -> f64 {
    c.iter()
        .map(|(k, q)| q.to_f64().unwrap_or(f64::NAN) * k.to_f64().unwrap_or(f64::NAN).sqrt())
        .sum()
}

fn negate(c: &Component) -> Component {
    c.iter().map(|(k, v)| (k.clone(), -v)).collect()
}

fn add_components(a: &Component, b: &Component) -> Component {
    let mut out = a.clone();
    for (k, v) in b {
        accumulate(&mut out, k.clone(), v.clone());
    }
    out
}

fn sub_components(a: &Component, b: &Component) -> Component {
    let mut out = a.clone();
    for (k, v) in b {
        accumulate(&mut out, k.clone(), -v);
    }
    out
}

fn accumulate(target: &mut Component, key: BigUint, value: BigRational) {
    use std::collections::btree_map::Entry;
    match target.entry(key) {
        Entry::Vacant(slot) => {
            if !value.is_zero() {
                slot.insert(value);
            }
        }
        Entry::Occupied(mut slot) => {
            let sum = slot.get() + value;
            if sum.is_zero() {
                slot.remove();
            } else {
                *slot.get_mut() = sum;
            }
        }
    }
}

/// `√j · √k = g · √((j/g)(k/g))` with `g = gcd(j, k)`; the product of two
/// coprime square-free integers is square-free.
fn mul_components(a: &Component, b: &Component) -> Component {
    let mut out = Component::new();
    for (ja, ca) in a {
        for (jb, cb) in b {
            let g = ja.gcd(jb);
            let radicand = (ja / &g) * (jb / &g);
            let coeff = ca * cb * BigRational::from_integer(BigInt::from(g));
            accumulate(&mut out, radicand, coeff);
        }
    }
    out
}

fn invert_real(x: &Component) -> Result<Component, ArithError> {
    let generators = coprime_base(x.keys());
    if generators.len() > MAX_INVERSE_GENERATORS {
        return Err(ArithError::DivisionUnsupported {
            generators: generators.len(),
        });
    }
    let one_key = BigUint::one();
    let mut acc: Component = [(one_key.clone(), BigRational::one())].into_iter().collect();
    let mut cur = x.clone();
    for g in &generators {
        // cur = u + v·√g; multiply by u − v·√g to eliminate g.
        let conj: Component = cur
            .iter()
            .map(|(k, c)| {
                if (k % g).is_zero() {
                    (k.clone(), -c)
                } else {
                    (k.clone(), c.clone())
                }
            })
            .collect();
        cur = mul_components(&cur, &conj);
        acc = mul_components(&acc, &conj);
    }
    debug_assert!(cur.len() == 1 && cur.contains_key(&one_key));
    let rational = cur.get(&one_key).cloned().ok_or(ArithError::DivisionByZero)?;
    let scale = rational.recip();
    Ok(acc.into_iter().map(|(k, c)| (k, c * &scale)).collect())
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: add_components(&self.re, &rhs.re),
            im: add_components(&self.im, &rhs.im),
        }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: sub_components(&self.re, &rhs.re),
            im: sub_components(&self.im, &rhs.im),
        }
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        // (a + bi)(c + di) = (ac − bd) + (ad + bc)i
        let re = sub_components(&mul_components(&self.re, &rhs.re), &mul_components(&self.im, &rhs.im));
        let im = add_components(&mul_components(&self.re, &rhs.im), &mul_components(&self.im, &rhs.re));
        ExactScalar { re, im }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            re: negate(&self.re),
            im: negate(&self.im),
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

/// `a·d − b·c`, the 2×2 minor of `[[a, b], [c, d]]`.
pub fn cross_minor(a: &ExactScalar, b: &ExactScalar, c: &ExactScalar, d: &ExactScalar) -> ExactScalar {
    &(a * d) - &(b * c)
}
