//! Exact polynomial arithmetic.
//!
//! Three coefficient-level types live here:
//!
//! - [`NCPoly`]: the free associative algebra `Q<x_1,...,x_d>`, sparse over words.
//! - [`CommPoly`]: the polynomial ring `Q[x_1,...,x_d]`, sparse over exponent vectors.
//! - [`LocalizedElement`]: sections `p / f^m` over the basic open `X(f)`.
//!
//! All maps are keyed in degree-lexicographic order, so equality is structural.
//! Generator indices are 1-based throughout (`x1` is generator 1).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Ring;

pub type Rational = BigRational;

/// Integer literal as an exact rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-2/5"` and similar.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad rational literal `{s}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

// ---------------------------------------------------------------------------
// Words

/// A monomial of the free algebra. The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Self {
        Word(letters)
    }

    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    fn check(&self, d: usize) -> Result<()> {
        for &l in &self.0 {
            if l == 0 || l as usize > d {
                return Err(Error::GeneratorOutOfRange { index: l as usize, d });
            }
        }
        Ok(())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// ---------------------------------------------------------------------------
// Free associative algebra

/// Element of `Q<x_1,...,x_d>`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NCPoly {
    d: usize,
    terms: BTreeMap<Word, Rational>,
}

impl NCPoly {
    pub fn zero(d: usize) -> Self {
        NCPoly { d, terms: BTreeMap::new() }
    }

    pub fn one(d: usize) -> Self {
        Self::constant(d, Rational::one())
    }

    pub fn constant(d: usize, c: Rational) -> Self {
        let mut p = Self::zero(d);
        p.add_term(Word::unit(), c);
        p
    }

    /// The generator `x_i`.
    pub fn generator(d: usize, i: usize) -> Result<Self> {
        Self::monomial(d, Word(vec![i as u32]), Rational::one())
    }

    pub fn monomial(d: usize, w: Word, c: Rational) -> Result<Self> {
        w.check(d)?;
        let mut p = Self::zero(d);
        p.add_term(w, c);
        Ok(p)
    }

    pub fn from_terms<I>(d: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Rational)>,
    {
        let mut p = Self::zero(d);
        for (w, c) in terms {
            w.check(d)?;
            p.add_term(w, c);
        }
        Ok(p)
    }

    /// Parses the text grammar, e.g. `3*x2*x1 - x1*x2`. Factor order is kept.
    pub fn parse(s: &str, d: usize) -> Result<Self> {
        let mut p = Self::zero(d);
        for (c, letters) in parse_terms(s)? {
            let w = Word(letters);
            w.check(d)?;
            p.add_term(w, c);
        }
        Ok(p)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest word length; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::degree).max()
    }

    pub(crate) fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn same_alphabet(&self, other: &NCPoly) -> Result<()> {
        if self.d != other.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: other.d });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &NCPoly) -> Result<NCPoly> {
        self.same_alphabet(other)?;
        let mut r = self.clone();
        for (w, c) in &other.terms {
            r.add_term(w.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &NCPoly) -> Result<NCPoly> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero(self.d);
        }
        NCPoly {
            d: self.d,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Abelianization `Q<x> -> Q[x]`: each word goes to its exponent vector.
    pub fn abelianize(&self) -> CommPoly {
        let mut r = CommPoly::zero(self.d);
        for (w, c) in &self.terms {
            let mut e = vec![0u32; self.d];
            for &l in w.letters() {
                e[l as usize - 1] += 1;
            }
            r.add_term(Exponent(e), c.clone());
        }
        r
    }

    /// Evaluates at images of the generators inside an arbitrary ring, keeping
    /// the order of factors.
    pub fn eval<T: Ring>(&self, images: &[T], one: &T) -> Result<T> {
        if images.len() != self.d {
            return Err(Error::LengthMismatch { expected: self.d, found: images.len() });
        }
        let mut acc = one.zero_like();
        for (w, c) in &self.terms {
            let mut prod = one.clone();
            for &l in w.letters() {
                prod = prod.mul_ref(&images[l as usize - 1]);
            }
            acc = acc.add_ref(&prod.scale(c));
        }
        Ok(acc)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let factors: Vec<&str> =
                w.letters().iter().map(|&l| names[l as usize - 1].as_str()).collect();
            push_term(&mut out, k == 0, c, &factors.join("*"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Free-algebra product: bilinear extension of word concatenation.
pub fn nc_mul(p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
    p.same_alphabet(q)?;
    let mut r = NCPoly::zero(p.d);
    for (u, a) in &p.terms {
        for (v, b) in &q.terms {
            r.add_term(u.concat(v), a * b);
        }
    }
    Ok(r)
}

/// `[p, q] = pq - qp`.
pub fn nc_commutator(p: &NCPoly, q: &NCPoly) -> Result<NCPoly> {
    nc_mul(p, q)?.checked_sub(&nc_mul(q, p)?)
}

pub fn abelianize(p: &NCPoly) -> CommPoly {
    p.abelianize()
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.d).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        self.checked_add(rhs).expect("NCPoly addition across alphabets")
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        self.checked_sub(rhs).expect("NCPoly subtraction across alphabets")
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        nc_mul(self, rhs).expect("NCPoly product across alphabets")
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(&-Rational::one())
    }
}

impl Ring for NCPoly {
    fn zero_like(&self) -> Self {
        NCPoly::zero(self.d)
    }
    fn one_like(&self) -> Self {
        NCPoly::one(self.d)
    }
    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Rational) -> Self {
        NCPoly::scale(self, c)
    }
}

// ---------------------------------------------------------------------------
// Commutative polynomials

/// Exponent vector, ordered by total degree and then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of `Q[x_1,...,x_n]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CommPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl CommPoly {
    pub fn zero(nvars: usize) -> Self {
        CommPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Exponent(vec![0; nvars]), c);
        p
    }

    /// The variable `x_i` (1-based).
    pub fn var(nvars: usize, i: usize) -> Result<Self> {
        if i == 0 || i > nvars {
            return Err(Error::GeneratorOutOfRange { index: i, d: nvars });
        }
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        Ok(Self::monomial(Exponent(e), Rational::one()))
    }

    pub fn monomial(e: Exponent, c: Rational) -> Self {
        let mut p = Self::zero(e.0.len());
        p.add_term(e, c);
        p
    }

    /// Same grammar as [`NCPoly::parse`]; factor order is irrelevant.
    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (c, letters) in parse_terms(s)? {
            let mut e = vec![0u32; nvars];
            for l in letters {
                if l == 0 || l as usize > nvars {
                    return Err(Error::GeneratorOutOfRange { index: l as usize, d: nvars });
                }
                e[l as usize - 1] += 1;
            }
            p.add_term(Exponent(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the constant value when the polynomial has degree 0.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                (e.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::degree).max()
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: Rational) {
        debug_assert_eq!(e.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_ring(&self, other: &CommPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::AlphabetMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CommPoly) -> Result<CommPoly> {
        self.same_ring(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &CommPoly) -> Result<CommPoly> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    pub fn checked_mul(&self, other: &CommPoly) -> Result<CommPoly> {
        self.same_ring(other)?;
        let mut r = CommPoly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.0.iter().zip(&b.0).map(|(i, j)| i + j).collect();
                r.add_term(Exponent(e), x * y);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &Rational) -> CommPoly {
        if c.is_zero() {
            return CommPoly::zero(self.nvars);
        }
        CommPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> CommPoly {
        let mut r = CommPoly::one(self.nvars);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Formal partial derivative with respect to `x_i` (1-based).
    pub fn partial_derivative(&self, i: usize) -> Result<CommPoly> {
        if i == 0 || i > self.nvars {
            return Err(Error::GeneratorOutOfRange { index: i, d: self.nvars });
        }
        let mut r = CommPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[i - 1];
            if k == 0 {
                continue;
            }
            let mut e2 = e.0.clone();
            e2[i - 1] -= 1;
            r.add_term(Exponent(e2), c * rat(k as i64));
        }
        Ok(r)
    }

    /// Exact quotient `self / f`, or `None` when `f` does not divide `self`.
    ///
    /// A single polynomial is a Gröbner basis of the ideal it generates, so
    /// division by leading terms decides divisibility.
    pub fn div_exact(&self, f: &CommPoly) -> Result<Option<CommPoly>> {
        self.same_ring(f)?;
        let (lf, lc) = match f.terms.last_key_value() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => return Err(Error::ZeroCenter),
        };
        let mut rem = self.clone();
        let mut quot = CommPoly::zero(self.nvars);
        while let Some((lr, cr)) = rem.terms.last_key_value() {
            if !lf.divides(lr) {
                return Ok(None);
            }
            let e = Exponent(lr.0.iter().zip(&lf.0).map(|(a, b)| a - b).collect());
            let q = CommPoly::monomial(e, cr / &lc);
            rem = &rem - &(&q * f);
            quot = &quot + &q;
        }
        Ok(Some(quot))
    }

    /// Evaluates at values in a commutative ring.
    pub fn eval<T: Ring>(&self, values: &[T], one: &T) -> Result<T> {
        if values.len() != self.nvars {
            return Err(Error::LengthMismatch { expected: self.nvars, found: values.len() });
        }
        let mut acc = one.zero_like();
        for (e, c) in &self.terms {
            let mut prod = one.clone();
            for (v, &k) in values.iter().zip(&e.0) {
                for _ in 0..k {
                    prod = prod.mul_ref(v);
                }
            }
            acc = acc.add_ref(&prod.scale(c));
        }
        Ok(acc)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mut factors = Vec::new();
            for (i, &p) in e.0.iter().enumerate() {
                match p {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], p)),
                }
            }
            push_term(&mut out, k == 0, c, &factors.join("*"));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Ordered lift `x_1^{a_1} ... x_d^{a_d}` of each monomial into the free algebra.
    pub fn ordered_lift(&self) -> NCPoly {
        let mut r = NCPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(Word(ordered_letters(e)), c.clone());
        }
        r
    }
}

/// Letters of the nondecreasing word with exponent vector `e`.
pub fn ordered_letters(e: &Exponent) -> Vec<u32> {
    let mut v = Vec::with_capacity(e.degree() as usize);
    for (i, &k) in e.0.iter().enumerate() {
        v.extend(std::iter::repeat_n(i as u32 + 1, k as usize));
    }
    v
}

/// Partial derivative of a commutative polynomial.
pub fn partial_derivative(f: &CommPoly, i: usize) -> Result<CommPoly> {
    f.partial_derivative(i)
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

impl Add for &CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &CommPoly) -> CommPoly {
        self.checked_add(rhs).expect("CommPoly addition across rings")
    }
}

impl Sub for &CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &CommPoly) -> CommPoly {
        self.checked_sub(rhs).expect("CommPoly subtraction across rings")
    }
}

impl Mul for &CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &CommPoly) -> CommPoly {
        self.checked_mul(rhs).expect("CommPoly product across rings")
    }
}

impl Neg for &CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        self.scale(&-Rational::one())
    }
}

impl Ring for CommPoly {
    fn zero_like(&self) -> Self {
        CommPoly::zero(self.nvars)
    }
    fn one_like(&self) -> Self {
        CommPoly::one(self.nvars)
    }
    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Rational) -> Self {
        CommPoly::scale(self, c)
    }
}

// ---------------------------------------------------------------------------
// Sections over a basic open X(f)

/// `numerator / center^power`, kept reduced: when `power > 0` the center does
/// not divide the numerator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LocalizedElement {
    numerator: CommPoly,
    power: u32,
    center: CommPoly,
}

impl LocalizedElement {
    pub fn new(numerator: CommPoly, power: u32, center: CommPoly) -> Result<Self> {
        if center.is_zero() {
            return Err(Error::ZeroCenter);
        }
        numerator.same_ring(&center)?;
        let mut e = LocalizedElement { numerator, power, center };
        e.reduce()?;
        Ok(e)
    }

    pub fn from_poly(p: CommPoly, center: CommPoly) -> Result<Self> {
        Self::new(p, 0, center)
    }

    fn reduce(&mut self) -> Result<()> {
        if self.numerator.is_zero() {
            self.power = 0;
            return Ok(());
        }
        while self.power > 0 {
            match self.numerator.div_exact(&self.center)? {
                Some(q) => {
                    self.numerator = q;
                    self.power -= 1;
                }
                None => break,
            }
        }
        Ok(())
    }

    pub fn numerator(&self) -> &CommPoly {
        &self.numerator
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn center(&self) -> &CommPoly {
        &self.center
    }

    pub fn nvars(&self) -> usize {
        self.center.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn zero_like(&self) -> Self {
        LocalizedElement {
            numerator: CommPoly::zero(self.nvars()),
            power: 0,
            center: self.center.clone(),
        }
    }

    fn same_open(&self, other: &Self) -> Result<()> {
        if self.center != other.center {
            return Err(Error::CenterMismatch);
        }
        Ok(())
    }

    /// Numerator rewritten over `center^power` for `power >= self.power`.
    fn lifted(&self, power: u32) -> CommPoly {
        &self.numerator * &self.center.pow(power - self.power)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_open(other)?;
        let m = self.power.max(other.power);
        Self::new(&self.lifted(m) + &other.lifted(m), m, self.center.clone())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_open(other)?;
        Self::new(
            &self.numerator * &other.numerator,
            self.power + other.power,
            self.center.clone(),
        )
    }

    pub fn mul_poly(&self, p: &CommPoly) -> Result<Self> {
        Self::new(self.numerator.checked_mul(p)?, self.power, self.center.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut r = self.clone();
        r.numerator = r.numerator.scale(c);
        if r.numerator.is_zero() {
            r.power = 0;
        }
        r
    }

    /// Quotient rule: `d(p/f^m) = (dp*f - m*p*df) / f^(m+1)`, reduced.
    pub fn partial(&self, i: usize) -> Result<Self> {
        let dp = self.numerator.partial_derivative(i)?;
        if self.power == 0 {
            return Self::new(dp, 0, self.center.clone());
        }
        let df = self.center.partial_derivative(i)?;
        let num = &(&dp * &self.center)
            - &(&self.numerator * &df).scale(&rat(self.power as i64));
        Self::new(num, self.power + 1, self.center.clone())
    }
}

pub fn localized_derivative(g: &LocalizedElement, i: usize) -> Result<LocalizedElement> {
    g.partial(i)
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.power {
            0 => write!(f, "{}", self.numerator),
            1 => write!(f, "({})/({})", self.numerator, self.center),
            k => write!(f, "({})/({})^{}", self.numerator, self.center, k),
        }
    }
}

// ---------------------------------------------------------------------------
// Text grammar

fn push_term(out: &mut String, first: bool, c: &Rational, mono: &str) {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if mono.is_empty() {
        out.push_str(&abs.to_string());
    } else if abs.is_one() {
        out.push_str(mono);
    } else {
        out.push_str(&format!("{abs}*{mono}"));
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Var(u32),
    Star,
    Plus,
    Minus,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            'x' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(Error::Parse(format!("expected generator index after `x` in `{s}`")));
                }
                let idx: String = chars[start..j].iter().collect();
                let idx = idx
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad generator index in `{s}`")))?;
                out.push(Token::Var(idx));
                i = j;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let mut lit: String = chars[i..j].iter().collect();
                if j < chars.len() && chars[j] == '/' {
                    let k0 = j + 1;
                    let mut k = k0;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    if k == k0 {
                        return Err(Error::Parse(format!("dangling `/` in `{s}`")));
                    }
                    lit.push('/');
                    lit.extend(&chars[k0..k]);
                    j = k;
                }
                out.push(Token::Num(parse_rational(&lit)?));
                i = j;
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}` in `{s}`"))),
        }
    }
    Ok(out)
}

/// Splits a polynomial string into `(coefficient, generator sequence)` terms.
pub(crate) fn parse_terms(s: &str) -> Result<Vec<(Rational, Vec<u32>)>> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut pos = 0;
    let mut first = true;
    while pos < toks.len() {
        let mut sign = Rational::one();
        match toks[pos] {
            Token::Plus => pos += 1,
            Token::Minus => {
                sign = -sign;
                pos += 1
            }
            _ if first => {}
            _ => return Err(Error::Parse(format!("expected `+` or `-` in `{s}`"))),
        }
        first = false;
        let mut coeff = sign;
        let mut letters = Vec::new();
        let mut expect_factor = true;
        while pos < toks.len() {
            if expect_factor {
                match &toks[pos] {
                    Token::Num(q) => coeff *= q.clone(),
                    Token::Var(v) => {
                        let mut power = 1;
                        if toks.get(pos + 1) == Some(&Token::Caret) {
                            match toks.get(pos + 2) {
                                Some(Token::Num(q)) if q.is_integer() && !q.is_negative() => {
                                    power = q.to_integer().try_into().map_err(|_| {
                                        Error::Parse(format!("exponent too large in `{s}`"))
                                    })?;
                                    pos += 2;
                                }
                                _ => return Err(Error::Parse(format!("bad exponent in `{s}`"))),
                            }
                        }
                        for _ in 0..power {
                            letters.push(*v);
                        }
                    }
                    _ => return Err(Error::Parse(format!("expected a factor in `{s}`"))),
                }
                pos += 1;
                expect_factor = false;
            } else if toks[pos] == Token::Star {
                pos += 1;
                expect_factor = true;
            } else {
                break;
            }
        }
        if expect_factor {
            return Err(Error::Parse(format!("incomplete term in `{s}`")));
        }
        terms.push((coeff, letters));
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nc(s: &str) -> NCPoly {
        NCPoly::parse(s, 2).unwrap()
    }

    fn cp(s: &str) -> CommPoly {
        CommPoly::parse(s, 2).unwrap()
    }

    #[test]
    fn generator_product_and_unit() {
        assert_eq!(&nc("x1") * &nc("x2"), nc("x1*x2"));
        let p = nc("3*x2*x1 - x1*x2 + 1/2");
        assert_eq!(&NCPoly::one(2) * &p, p);
        assert_eq!(&p * &NCPoly::one(2), p);
    }

    #[test]
    fn distributive_expansion() {
        let lhs = &nc("x1 + x2") * &nc("x1 - x2");
        assert_eq!(lhs, nc("x1*x1 - x1*x2 + x2*x1 - x2*x2"));
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let p = NCPoly::parse("x1", 1).unwrap();
        let q = NCPoly::parse("x1", 2).unwrap();
        assert_eq!(nc_mul(&p, &q), Err(Error::AlphabetMismatch { left: 1, right: 2 }));
        assert!(NCPoly::parse("x3", 2).is_err());
    }

    #[test]
    fn commutator_examples() {
        let x1 = nc("x1");
        let x2 = nc("x2");
        assert_eq!(nc_commutator(&x2, &x1).unwrap(), nc("x2*x1 - x1*x2"));
        let p = nc("x1*x2 + 3*x2");
        assert!(nc_commutator(&p, &p).unwrap().is_zero());
        let inner = nc_commutator(&x2, &x1).unwrap();
        let outer = nc_commutator(&inner, &x2).unwrap();
        assert_eq!(outer, nc("x2*x1*x2 - x1*x2*x2 - x2*x2*x1 + x2*x1*x2"));
    }

    #[test]
    fn partial_derivative_examples() {
        assert_eq!(cp("x1^2*x2").partial_derivative(1).unwrap(), cp("2*x1*x2"));
        assert!(cp("7").partial_derivative(2).unwrap().is_zero());
        assert_eq!(cp("x1*x2 + x2^3").partial_derivative(2).unwrap(), cp("x1 + 3*x2^2"));
        assert!(cp("x1").partial_derivative(3).is_err());
        assert!(cp("x1").partial_derivative(0).is_err());
    }

    #[test]
    fn localized_derivative_examples() {
        let x1 = cp("x1");
        let inv = LocalizedElement::new(cp("1"), 1, x1.clone()).unwrap();
        let d = localized_derivative(&inv, 1).unwrap();
        assert_eq!(d, LocalizedElement::new(cp("-1"), 2, x1.clone()).unwrap());

        let g = LocalizedElement::new(cp("x2"), 1, x1.clone()).unwrap();
        assert_eq!(g.partial(2).unwrap(), LocalizedElement::new(cp("1"), 1, x1.clone()).unwrap());

        let h = LocalizedElement::new(cp("x1 + x2"), 2, x1.clone()).unwrap();
        assert_eq!(
            h.partial(1).unwrap(),
            LocalizedElement::new(cp("-x1 - 2*x2"), 3, x1.clone()).unwrap()
        );
        assert!(h.partial(5).is_err());
    }

    #[test]
    fn localized_elements_reduce() {
        let f = cp("x1 + x2");
        let e = LocalizedElement::new(cp("x1^2 + 2*x1*x2 + x2^2"), 3, f.clone()).unwrap();
        assert_eq!(e.power(), 1);
        assert_eq!(e.numerator(), &cp("1"));
        assert_eq!(LocalizedElement::new(cp("x1"), 1, cp("0")), Err(Error::ZeroCenter));
        let z = LocalizedElement::new(CommPoly::zero(2), 4, f).unwrap();
        assert_eq!(z.power(), 0);
    }

    #[test]
    fn abelianize_examples() {
        assert_eq!(nc("x2*x1").abelianize(), cp("x1*x2"));
        assert!(nc("x2*x1 - x1*x2").abelianize().is_zero());
        assert_eq!(nc("x1*x2*x1 - 2*x2").abelianize(), cp("x1^2*x2 - 2*x2"));
    }

    #[test]
    fn display_parse_round_trip() {
        let p = nc("3*x2*x1 - x1*x2 + 1/2*x1 - 4");
        assert_eq!(NCPoly::parse(&p.to_string(), 2).unwrap(), p);
        let q = cp("x1^3*x2 - 2/3*x2 + 5");
        assert_eq!(CommPoly::parse(&q.to_string(), 2).unwrap(), q);
        assert_eq!(NCPoly::zero(2).to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        assert!(NCPoly::parse("", 2).is_err());
        assert!(NCPoly::parse("x1 +", 2).is_err());
        assert!(NCPoly::parse("x1 x2", 2).is_err());
        assert!(NCPoly::parse("y1", 2).is_err());
        assert!(NCPoly::parse("1/0", 2).is_err());
    }

    #[test]
    fn exact_division() {
        let f = cp("x1 - x2");
        let p = &f * &cp("x1^2 + x2 + 3");
        assert_eq!(p.div_exact(&f).unwrap(), Some(cp("x1^2 + x2 + 3")));
        assert_eq!(cp("x1^2 + 1").div_exact(&f).unwrap(), None);
    }

    fn arb_nc(d: usize, max_deg: usize) -> impl Strategy<Value = NCPoly> {
        prop::collection::vec(
            (-3i64..=3, prop::collection::vec(1u32..=d as u32, 0..=max_deg)),
            0..5,
        )
        .prop_map(move |ts| {
            NCPoly::from_terms(d, ts.into_iter().map(|(c, w)| (Word::new(w), rat(c)))).unwrap()
        })
    }

    fn arb_comm(n: usize, max_deg: u32) -> impl Strategy<Value = CommPoly> {
        prop::collection::vec((-3i64..=3, prop::collection::vec(0..=max_deg, n)), 0..5).prop_map(
            move |ts| {
                let mut p = CommPoly::zero(n);
                for (c, e) in ts {
                    p.add_term(Exponent(e), rat(c));
                }
                p
            },
        )
    }

    proptest! {
        #[test]
        fn nc_mul_is_associative(p in arb_nc(3, 2), q in arb_nc(3, 2), r in arb_nc(3, 2)) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        }

        #[test]
        fn abelianize_is_multiplicative(p in arb_nc(3, 3), q in arb_nc(3, 3)) {
            prop_assert_eq!((&p * &q).abelianize(), &p.abelianize() * &q.abelianize());
            prop_assert!(nc_commutator(&p, &q).unwrap().abelianize().is_zero());
        }

        #[test]
        fn jacobi_identity(p in arb_nc(2, 2), q in arb_nc(2, 2), r in arb_nc(2, 2)) {
            let a = nc_commutator(&p, &nc_commutator(&q, &r).unwrap()).unwrap();
            let b = nc_commutator(&q, &nc_commutator(&r, &p).unwrap()).unwrap();
            let c = nc_commutator(&r, &nc_commutator(&p, &q).unwrap()).unwrap();
            prop_assert!((&(&a + &b) + &c).is_zero());
        }

        #[test]
        fn leibniz_and_mixed_partials(f in arb_comm(3, 3), g in arb_comm(3, 3)) {
            for i in 1..=3 {
                let lhs = (&f * &g).partial_derivative(i).unwrap();
                let rhs = &(&f.partial_derivative(i).unwrap() * &g)
                    + &(&f * &g.partial_derivative(i).unwrap());
                prop_assert_eq!(lhs, rhs);
                for j in 1..=3 {
                    prop_assert_eq!(
                        f.partial_derivative(i).unwrap().partial_derivative(j).unwrap(),
                        f.partial_derivative(j).unwrap().partial_derivative(i).unwrap()
                    );
                }
            }
        }

        #[test]
        fn localized_partials(f in arb_comm(2, 2), m in 0u32..3) {
            let center = cp("x1 + x2^2 + 1");
            let e = LocalizedElement::new(f.clone(), m, center).unwrap();
            if m == 0 {
                let lhs = e.partial(1).unwrap();
                prop_assert_eq!(lhs.numerator(), &f.partial_derivative(1).unwrap());
            }
            prop_assert_eq!(
                e.partial(1).unwrap().partial(2).unwrap(),
                e.partial(2).unwrap().partial(1).unwrap()
            );
        }
    }
}
