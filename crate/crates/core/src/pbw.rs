//! PBW normal forms in the free algebra and the calculus built on them.
//!
//! Every element of `Q<x1..xd>` is uniquely `Σ [[f_λ]] M_λ`, where `[[f]]`
//! lifts a commutative polynomial as nondecreasing words and `M_λ` is a
//! nondecreasing product of Hall basis elements of weight at least two.
//! Normal forms are computed by inserting basis elements one at a time into
//! sorted factor sequences; a descent `t b` with `t > b` is rewritten to
//! `b t + [t, b]`. Rewriting never lowers `ord`, so truncated products can
//! discard terms as soon as their `ord` reaches the truncation level.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hallbasis::HallBasis;
use crate::ncpoly::{nc_mul, ordered_letters, CommPoly, Exponent, LocalizedElement, NCPoly, Rational};

type Seq = Vec<usize>;
type Nf = BTreeMap<Seq, Rational>;

/// A sorted multiset of basis positions, all of weight at least two.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BracketMonomial {
    entries: Vec<usize>,
    ord: usize,
}

impl Ord for BracketMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.ord.cmp(&other.ord).then_with(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for BracketMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl BracketMonomial {
    pub fn empty() -> Self {
        BracketMonomial { entries: Vec::new(), ord: 0 }
    }

    pub fn new(mut entries: Vec<usize>, basis: &HallBasis) -> Result<Self> {
        entries.sort_unstable();
        let mut ord = 0;
        for &e in &entries {
            let el = basis.element(e)?;
            if el.weight < 2 {
                return Err(Error::InvalidMonomial(format!(
                    "{} has weight 1; generators belong in the coefficient",
                    basis.sexpr(e)
                )));
            }
            ord += el.weight - 1;
        }
        Ok(BracketMonomial { entries, ord })
    }

    /// Parses 1-based basis indices, as used in serialized output.
    pub fn from_indices(indices: &[usize], basis: &HallBasis) -> Result<Self> {
        let entries = indices
            .iter()
            .map(|&i| i.checked_sub(1).ok_or(Error::UnknownBasisElement(0)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries, basis)
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e + 1).collect()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn ord(&self) -> usize {
        self.ord
    }

    pub fn weight(&self) -> usize {
        self.ord + self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn display(&self, basis: &HallBasis) -> String {
        let parts: Vec<String> = self.entries.iter().map(|&e| basis.sexpr(e)).collect();
        format!("M{{{}}}", parts.join(","))
    }
}

/// All bracket monomials with `ord <= max_ord`, ordered by `ord` then entries.
pub fn bracket_monomials(basis: &HallBasis, max_ord: usize) -> Result<Vec<BracketMonomial>> {
    if max_ord + 1 > basis.max_weight() && max_ord > 0 {
        return Err(Error::BasisTooSmall { required: max_ord + 1, available: basis.max_weight() });
    }
    let cands: Vec<usize> = basis
        .elements()
        .iter()
        .filter(|e| e.weight >= 2 && e.weight - 1 <= max_ord)
        .map(|e| e.index)
        .collect();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn go(
        basis: &HallBasis,
        cands: &[usize],
        from: usize,
        left: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<BracketMonomial>,
    ) {
        out.push(BracketMonomial { entries: stack.clone(), ord: 0 });
        for k in from..cands.len() {
            let o = basis.ord(cands[k]);
            if o <= left {
                stack.push(cands[k]);
                go(basis, cands, k, left - o, stack, out);
                stack.pop();
            }
        }
    }
    go(basis, &cands, 0, max_ord, &mut stack, &mut out);
    for m in &mut out {
        m.ord = m.entries.iter().map(|&e| basis.ord(e)).sum();
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PBWElement {
    d: usize,
    terms: BTreeMap<BracketMonomial, CommPoly>,
}

impl PBWElement {
    pub fn zero(d: usize) -> Self {
        PBWElement { d, terms: BTreeMap::new() }
    }

    pub fn from_terms(d: usize, terms: impl IntoIterator<Item = (BracketMonomial, CommPoly)>) -> Result<Self> {
        let mut out = Self::zero(d);
        for (m, f) in terms {
            out.add_term(m, f)?;
        }
        Ok(out)
    }

    /// `[[f]] M_∅`.
    pub fn scalar_poly(f: CommPoly) -> Self {
        let d = f.nvars();
        let mut out = Self::zero(d);
        if !f.is_zero() {
            out.terms.insert(BracketMonomial::empty(), f);
        }
        out
    }

    pub fn add_term(&mut self, m: BracketMonomial, f: CommPoly) -> Result<()> {
        if f.nvars() != self.d {
            return Err(Error::AlphabetMismatch { left: self.d, right: f.nvars() });
        }
        let sum = match self.terms.remove(&m) {
            Some(g) => g.checked_add(&f)?,
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BracketMonomial, &CommPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &BracketMonomial) -> CommPoly {
        self.terms.get(m).cloned().unwrap_or_else(|| CommPoly::zero(self.d))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Removes every term with `ord >= k`.
    pub fn truncate(&self, k: usize) -> Self {
        PBWElement {
            d: self.d,
            terms: self.terms.iter().filter(|(m, _)| m.ord < k).map(|(m, f)| (m.clone(), f.clone())).collect(),
        }
    }

    pub fn display(&self, basis: &HallBasis) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, f)| {
                if m.is_empty() {
                    format!("[[{f}]]")
                } else {
                    format!("[[{f}]]*{}", m.display(basis))
                }
            })
            .collect();
        parts.join(" + ")
    }

    fn to_nf(&self) -> Nf {
        let mut out = Nf::new();
        for (m, f) in &self.terms {
            for (e, c) in f.terms() {
                let mut s: Seq = ordered_letters(e).into_iter().map(|g| g as usize - 1).collect();
                s.extend_from_slice(&m.entries);
                out.insert(s, c.clone());
            }
        }
        out
    }

    fn from_nf(d: usize, basis: &HallBasis, nf: &Nf) -> Self {
        let mut out = Self::zero(d);
        for (s, c) in nf {
            let split = s.iter().position(|&b| basis.weight(b) >= 2).unwrap_or(s.len());
            let mut exp = vec![0u32; d];
            for &g in &s[..split] {
                exp[g] += 1;
            }
            let entries = s[split..].to_vec();
            let ord = entries.iter().map(|&e| basis.ord(e)).sum();
            let mono = CommPoly::monomial(Exponent(exp), c.clone());
            out.add_term(BracketMonomial { entries, ord }, mono).expect("alphabet fixed");
        }
        out
    }
}

/// Memoized straightening against a fixed basis and optional truncation.
pub struct Straightener<'a> {
    basis: &'a HallBasis,
    trunc: Option<usize>,
    memo: HashMap<(Seq, usize), Arc<Vec<(Seq, Rational)>>>,
}

impl<'a> Straightener<'a> {
    pub fn new(basis: &'a HallBasis, trunc: Option<usize>) -> Self {
        Straightener { basis, trunc, memo: HashMap::new() }
    }

    pub fn basis(&self) -> &'a HallBasis {
        self.basis
    }

    fn seq_ord(&self, s: &[usize]) -> usize {
        s.iter().map(|&b| self.basis.ord(b)).sum()
    }

    fn dropped(&self, ord: usize) -> bool {
        self.trunc.is_some_and(|k| ord >= k)
    }

    /// Normal form of `seq * b` for a sorted `seq`.
    fn insert(&mut self, seq: &[usize], b: usize) -> Result<Arc<Vec<(Seq, Rational)>>> {
        let base_ord = self.seq_ord(seq) + self.basis.ord(b);
        if self.dropped(base_ord) {
            return Ok(Arc::new(Vec::new()));
        }
        match seq.last() {
            None => return Ok(Arc::new(vec![(vec![b], Rational::one())])),
            Some(&t) if t <= b => {
                let mut s = seq.to_vec();
                s.push(b);
                return Ok(Arc::new(vec![(s, Rational::one())]));
            }
            _ => {}
        }
        let key = (seq.to_vec(), b);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let (p, t) = (&seq[..seq.len() - 1], seq[seq.len() - 1]);
        let mut acc = Nf::new();
        let pb = self.insert(p, b)?;
        for (s, c) in pb.iter() {
            let st = self.insert(s, t)?;
            for (s2, c2) in st.iter() {
                add_to(&mut acc, s2, &(c * c2));
            }
        }
        if !self.dropped(base_ord + 1) {
            let br = self.basis.bracket(t, b)?;
            for (e, lc) in br.terms() {
                let pe = self.insert(p, e)?;
                for (s, c) in pe.iter() {
                    add_to(&mut acc, s, &(lc * c));
                }
            }
        }
        let out = Arc::new(acc.into_iter().collect::<Vec<_>>());
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn mul_nf(&mut self, a: &Nf, b: &Nf) -> Result<Nf> {
        let mut out = Nf::new();
        for (sa, ca) in a {
            for (sb, cb) in b {
                let mut cur: Nf = [(sa.clone(), ca * cb)].into_iter().collect();
                for &x in sb {
                    let mut next = Nf::new();
                    for (s, c) in &cur {
                        for (s2, c2) in self.insert(s, x)?.iter() {
                            add_to(&mut next, s2, &(c * c2));
                        }
                    }
                    cur = next;
                }
                for (s, c) in cur {
                    add_to(&mut out, &s, &c);
                }
            }
        }
        Ok(out)
    }

    fn word_nf(&mut self, letters: &[u32], c: &Rational) -> Result<Nf> {
        let mut cur: Nf = [(Vec::new(), c.clone())].into_iter().collect();
        for &g in letters {
            let x = self.basis.leaf(g as usize)?;
            let mut next = Nf::new();
            for (s, c) in &cur {
                for (s2, c2) in self.insert(s, x)?.iter() {
                    add_to(&mut next, s2, &(c * c2));
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    pub fn normalize(&mut self, p: &NCPoly) -> Result<PBWElement> {
        if p.d() != self.basis.d() {
            return Err(Error::AlphabetMismatch { left: self.basis.d(), right: p.d() });
        }
        let deg = p.degree().unwrap_or(0);
        let need = self.trunc.map_or(deg, |k| deg.min(k));
        if need > self.basis.max_weight() {
            return Err(Error::BasisTooSmall { required: need, available: self.basis.max_weight() });
        }
        let mut nf = Nf::new();
        for (w, c) in p.terms() {
            for (s, c2) in self.word_nf(w.letters(), c)? {
                add_to(&mut nf, &s, &c2);
            }
        }
        Ok(PBWElement::from_nf(p.d(), self.basis, &nf))
    }

    pub fn mul(&mut self, a: &PBWElement, b: &PBWElement) -> Result<PBWElement> {
        let d = self.basis.d();
        if a.d != d || b.d != d {
            return Err(Error::AlphabetMismatch { left: a.d, right: b.d });
        }
        let deg = pbw_degree(a) + pbw_degree(b);
        let need = self.trunc.map_or(deg, |k| deg.min(k));
        if need > self.basis.max_weight() {
            return Err(Error::BasisTooSmall { required: need, available: self.basis.max_weight() });
        }
        let nf = self.mul_nf(&a.to_nf(), &b.to_nf())?;
        Ok(PBWElement::from_nf(d, self.basis, &nf))
    }
}

fn add_to(acc: &mut Nf, s: &[usize], c: &Rational) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(s) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                acc.remove(s);
            }
        }
        None => {
            acc.insert(s.to_vec(), c.clone());
        }
    }
}

/// Degree of the expansion in the free algebra.
fn pbw_degree(e: &PBWElement) -> usize {
    e.terms
        .iter()
        .map(|(m, f)| m.weight() + f.total_degree().unwrap_or(0) as usize)
        .max()
        .unwrap_or(0)
}

pub fn pbw_normalize(p: &NCPoly, basis: &HallBasis) -> Result<PBWElement> {
    Straightener::new(basis, None).normalize(p)
}

pub fn pbw_expand(e: &PBWElement, basis: &HallBasis) -> Result<NCPoly> {
    if e.d != basis.d() {
        return Err(Error::AlphabetMismatch { left: basis.d(), right: e.d });
    }
    let mut out = NCPoly::zero(e.d);
    for (m, f) in &e.terms {
        let mut prod = f.ordered_lift();
        for &b in &m.entries {
            prod = nc_mul(&prod, basis.expand_to_words(b)?)?;
        }
        out = out.checked_add(&prod)?;
    }
    Ok(out)
}

/// Largest `k` with `p` in `F^{-k}`.
pub fn filtration_degree(p: &NCPoly, basis: &HallBasis) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let e = pbw_normalize(p, basis)?;
    Ok(e.terms.keys().map(|m| m.ord).min().expect("nonzero"))
}

/// Product in the truncation `Q<x>/F^{-K}`.
pub fn truncated_mul(a: &PBWElement, b: &PBWElement, k: usize, basis: &HallBasis) -> Result<PBWElement> {
    if k == 0 {
        return Err(Error::InvalidArgument("truncation K must be at least 1".into()));
    }
    Straightener::new(basis, Some(k)).mul(&a.truncate(k), &b.truncate(k))
}

/// Something the differential operators `C_{λμ}^ν` can act on.
pub trait DiffRing: Clone {
    fn partial(&self, i: usize) -> Result<Self>;
    fn times(&self, other: &Self) -> Result<Self>;
    fn times_poly(&self, p: &CommPoly) -> Result<Self>;
    fn plus(&self, other: &Self) -> Result<Self>;
    fn zero_of(&self) -> Self;
}

impl DiffRing for CommPoly {
    fn partial(&self, i: usize) -> Result<Self> {
        self.partial_derivative(i)
    }
    fn times(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)
    }
    fn times_poly(&self, p: &CommPoly) -> Result<Self> {
        self.checked_mul(p)
    }
    fn plus(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn zero_of(&self) -> Self {
        CommPoly::zero(self.nvars())
    }
}

impl DiffRing for LocalizedElement {
    fn partial(&self, i: usize) -> Result<Self> {
        LocalizedElement::partial(self, i)
    }
    fn times(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)
    }
    fn times_poly(&self, p: &CommPoly) -> Result<Self> {
        self.mul_poly(p)
    }
    fn plus(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn zero_of(&self) -> Self {
        self.zero_like()
    }
}

fn apply_partials<T: DiffRing>(f: &T, alpha: &Exponent) -> Result<T> {
    let mut out = f.clone();
    for (i, &a) in alpha.0.iter().enumerate() {
        for _ in 0..a {
            out = out.partial(i + 1)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTerm {
    pub coeff: CommPoly,
    pub alpha: Exponent,
    pub beta: Exponent,
}

/// `(f, g) ↦ Σ c(x) ∂^α f ∂^β g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearOperator {
    pub lambda: BracketMonomial,
    pub mu: BracketMonomial,
    pub nu: BracketMonomial,
    pub terms: Vec<OperatorTerm>,
}

impl BilinearOperator {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn apply<T: DiffRing>(&self, f: &T, g: &T) -> Result<T> {
        let mut out = f.zero_of();
        let mut df: HashMap<&Exponent, T> = HashMap::new();
        let mut dg: HashMap<&Exponent, T> = HashMap::new();
        for t in &self.terms {
            if !df.contains_key(&t.alpha) {
                df.insert(&t.alpha, apply_partials(f, &t.alpha)?);
            }
            if !dg.contains_key(&t.beta) {
                dg.insert(&t.beta, apply_partials(g, &t.beta)?);
            }
            let term = df[&t.alpha].times(&dg[&t.beta])?.times_poly(&t.coeff)?;
            out = out.plus(&term)?;
        }
        Ok(out)
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let d = |e: &Exponent, v: &str| -> String {
            let parts: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| if a == 1 { format!("d{}", i + 1) } else { format!("d{}^{a}", i + 1) })
                .collect();
            if parts.is_empty() {
                v.to_string()
            } else {
                format!("{}({v})", parts.join("*"))
            }
        };
        self.terms
            .iter()
            .map(|t| format!("({})*{}*{}", t.coeff, d(&t.alpha, "f"), d(&t.beta, "g")))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn exponents_up_to(d: usize, max_deg: u32) -> Vec<Exponent> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if i == cur.len() {
            out.push(Exponent(cur.clone()));
            return;
        }
        for a in 0..=left {
            cur[i] = a;
            go(i + 1, left - a, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, max_deg, &mut vec![0; d], &mut out);
    out.sort();
    out
}

fn falling(a: &Exponent, alpha: &Exponent) -> Rational {
    let mut out = Rational::one();
    for (&ai, &bi) in a.0.iter().zip(&alpha.0) {
        for j in 0..bi {
            out *= Rational::from_integer((ai - j).into());
        }
    }
    out
}

fn le(a: &Exponent, b: &Exponent) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| x <= y)
}

fn sub(a: &Exponent, b: &Exponent) -> Exponent {
    Exponent(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
}

fn add(a: &Exponent, b: &Exponent) -> Exponent {
    Exponent(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
}

fn mono_seq(e: &Exponent, m: &BracketMonomial) -> Seq {
    let mut s: Seq = ordered_letters(e).into_iter().map(|g| g as usize - 1).collect();
    s.extend_from_slice(&m.entries);
    s
}

/// Extracted operators for a fixed `(λ, μ)`, one per target `ν` with
/// `ord(ν) < trunc`, by triangular interpolation on monomial pairs.
fn extract_all(
    st: &mut Straightener<'_>,
    lambda: &BracketMonomial,
    mu: &BracketMonomial,
    bound: u32,
) -> Result<BTreeMap<BracketMonomial, (BilinearOperator, bool)>> {
    let basis = st.basis;
    let d = basis.d();
    let trunc = st.trunc.expect("extraction runs truncated");
    if trunc > basis.max_weight() {
        return Err(Error::BasisTooSmall { required: trunc, available: basis.max_weight() });
    }
    let exps = exponents_up_to(d, bound);
    let mut pairs: Vec<(&Exponent, &Exponent)> =
        exps.iter().flat_map(|a| exps.iter().map(move |b| (a, b))).collect();
    pairs.sort_by_key(|(a, b)| a.degree() + b.degree());
    type Coeffs = BTreeMap<(Exponent, Exponent), CommPoly>;
    let mut found: BTreeMap<BracketMonomial, Coeffs> = BTreeMap::new();
    for (a, b) in pairs {
        let left: Nf = [(mono_seq(a, lambda), Rational::one())].into_iter().collect();
        let right: Nf = [(mono_seq(b, mu), Rational::one())].into_iter().collect();
        let prod = PBWElement::from_nf(d, basis, &st.mul_nf(&left, &right)?);
        let mut nus: Vec<BracketMonomial> = prod.terms.keys().cloned().collect();
        nus.extend(found.keys().cloned());
        nus.sort();
        nus.dedup();
        let norm = falling(a, a) * falling(b, b);
        for nu in nus {
            let mut rhs = prod.coeff(&nu);
            let cs = found.entry(nu).or_default();
            for ((al, be), c) in cs.iter() {
                if le(al, a) && le(be, b) && !(al == a && be == b) {
                    let shift = CommPoly::monomial(add(&sub(a, al), &sub(b, be)), falling(a, al) * falling(b, be));
                    rhs = rhs.checked_sub(&c.checked_mul(&shift)?)?;
                }
            }
            if !rhs.is_zero() {
                cs.insert((a.clone(), b.clone()), rhs.scale(&(Rational::one() / norm.clone())));
            }
        }
    }
    let mut out = BTreeMap::new();
    for (nu, cs) in found {
        if cs.is_empty() {
            continue;
        }
        let stable = cs.keys().all(|(a, b)| a.degree() < bound && b.degree() < bound);
        let terms = cs
            .into_iter()
            .map(|((alpha, beta), coeff)| OperatorTerm { coeff, alpha, beta })
            .collect();
        out.insert(nu.clone(), (BilinearOperator { lambda: lambda.clone(), mu: mu.clone(), nu, terms }, stable));
    }
    Ok(out)
}

fn default_bound(lambda: &BracketMonomial, mu: &BracketMonomial, trunc: usize) -> u32 {
    let top = 2 * trunc.saturating_sub(1);
    (top.saturating_sub(lambda.weight() + mu.weight()) + 1) as u32
}

/// The operator `C_{λμ}^ν`, requiring that no derivative of total order
/// `degree_bound` appears (the result is then unchanged from `degree_bound - 1`).
pub fn extract_c_operator(
    lambda: &BracketMonomial,
    mu: &BracketMonomial,
    nu: &BracketMonomial,
    degree_bound: u32,
    basis: &HallBasis,
) -> Result<BilinearOperator> {
    if degree_bound == 0 {
        return Err(Error::InvalidArgument("degree bound must be at least 1".into()));
    }
    let mut st = Straightener::new(basis, Some(nu.ord + 1));
    let all = extract_all(&mut st, lambda, mu, degree_bound)?;
    match all.get(nu) {
        None => Ok(BilinearOperator { lambda: lambda.clone(), mu: mu.clone(), nu: nu.clone(), terms: Vec::new() }),
        Some((_, false)) => Err(Error::OperatorNotStabilized {
            lambda: lambda.display(basis),
            mu: mu.display(basis),
            nu: nu.display(basis),
            bound: degree_bound as usize,
        }),
        Some((op, true)) => Ok(op.clone()),
    }
}

type OpMap = Arc<BTreeMap<BracketMonomial, BilinearOperator>>;

/// Cache of extracted operators for all targets of `ord < trunc`.
pub struct OperatorTable<'a> {
    basis: &'a HallBasis,
    trunc: usize,
    straightener: Mutex<Straightener<'a>>,
    ops: Mutex<HashMap<(BracketMonomial, BracketMonomial), OpMap>>,
}

impl<'a> OperatorTable<'a> {
    pub fn new(basis: &'a HallBasis, trunc: usize) -> Result<Self> {
        if trunc == 0 || trunc > basis.max_weight() {
            return Err(Error::BasisTooSmall { required: trunc.max(1), available: basis.max_weight() });
        }
        Ok(OperatorTable {
            basis,
            trunc,
            straightener: Mutex::new(Straightener::new(basis, Some(trunc))),
            ops: Mutex::new(HashMap::new()),
        })
    }

    pub fn basis(&self) -> &'a HallBasis {
        self.basis
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn operators(&self, lambda: &BracketMonomial, mu: &BracketMonomial) -> Result<OpMap> {
        let key = (lambda.clone(), mu.clone());
        if let Some(hit) = self.ops.lock().expect("operator cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let bound = default_bound(lambda, mu, self.trunc);
        let all = {
            let mut st = self.straightener.lock().expect("straightener poisoned");
            extract_all(&mut st, lambda, mu, bound)?
        };
        let mut map = BTreeMap::new();
        for (nu, (op, stable)) in all {
            if !stable {
                return Err(Error::OperatorNotStabilized {
                    lambda: lambda.display(self.basis),
                    mu: mu.display(self.basis),
                    nu: nu.display(self.basis),
                    bound: bound as usize,
                });
            }
            map.insert(nu, op);
        }
        let map = Arc::new(map);
        self.ops.lock().expect("operator cache poisoned").entry(key).or_insert_with(|| map.clone());
        Ok(map)
    }

    pub fn operator(&self, lambda: &BracketMonomial, mu: &BracketMonomial, nu: &BracketMonomial) -> Result<BilinearOperator> {
        if nu.ord >= self.trunc {
            return Err(Error::MissingOperator(format!("target {} lies beyond the truncation", nu.display(self.basis))));
        }
        let ops = self.operators(lambda, mu)?;
        Ok(ops.get(nu).cloned().unwrap_or_else(|| BilinearOperator {
            lambda: lambda.clone(),
            mu: mu.clone(),
            nu: nu.clone(),
            terms: Vec::new(),
        }))
    }

    fn pbw_product(&self, a: &PBWElement, b: &PBWElement) -> Result<PBWElement> {
        self.straightener.lock().expect("straightener poisoned").mul(a, b)
    }
}

#[derive(Clone, Debug)]
pub struct AssociativityReport {
    pub left: CommPoly,
    pub right: CommPoly,
    pub direct: CommPoly,
}

impl AssociativityReport {
    pub fn holds(&self) -> bool {
        self.left == self.right && self.right == self.direct
    }
}

/// Both sides of the associativity constraint for `C`, plus the `M_ν`
/// coefficient of the triple product computed directly.
pub fn associativity_sides(
    l1: &BracketMonomial,
    l2: &BracketMonomial,
    l3: &BracketMonomial,
    nu: &BracketMonomial,
    sample: (&CommPoly, &CommPoly, &CommPoly),
    table: &OperatorTable<'_>,
) -> Result<AssociativityReport> {
    let basis = table.basis;
    let (f, g, h) = sample;
    let d = basis.d();
    let mut left = CommPoly::zero(d);
    let mut right = CommPoly::zero(d);
    if nu.ord < table.trunc {
        for m in bracket_monomials(basis, nu.ord)? {
            if m.ord >= l1.ord + l2.ord && m.ord + l3.ord <= nu.ord {
                let inner = table.operator(l1, l2, &m)?;
                if !inner.is_zero() {
                    let outer = table.operator(&m, l3, nu)?;
                    left = left.checked_add(&outer.apply(&inner.apply(f, g)?, h)?)?;
                }
            }
            if m.ord >= l2.ord + l3.ord && m.ord + l1.ord <= nu.ord {
                let inner = table.operator(l2, l3, &m)?;
                if !inner.is_zero() {
                    let outer = table.operator(l1, &m, nu)?;
                    right = right.checked_add(&outer.apply(f, &inner.apply(g, h)?)?)?;
                }
            }
        }
    } else {
        return Err(Error::MissingOperator(format!("target {} lies beyond the truncation", nu.display(basis))));
    }
    let block = |m: &BracketMonomial, p: &CommPoly| PBWElement::from_terms(d, [(m.clone(), p.clone())]);
    let fg = table.pbw_product(&block(l1, f)?, &block(l2, g)?)?;
    let direct = table.pbw_product(&fg, &block(l3, h)?)?.coeff(nu);
    Ok(AssociativityReport { left, right, direct })
}

pub fn check_associativity_constraint(
    l1: &BracketMonomial,
    l2: &BracketMonomial,
    l3: &BracketMonomial,
    nu: &BracketMonomial,
    samples: &[(CommPoly, CommPoly, CommPoly)],
    table: &OperatorTable<'_>,
) -> Result<bool> {
    for (f, g, h) in samples {
        if !associativity_sides(l1, l2, l3, nu, (f, g, h), table)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A truncated section `Σ [[f_λ]] M_λ` over the basic open `X(center)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSection {
    center: CommPoly,
    trunc: usize,
    terms: BTreeMap<BracketMonomial, LocalizedElement>,
}

impl FormalSection {
    pub fn new(center: CommPoly, trunc: usize) -> Result<Self> {
        if center.is_zero() {
            return Err(Error::ZeroCenter);
        }
        Ok(FormalSection { center, trunc, terms: BTreeMap::new() })
    }

    pub fn from_pbw(e: &PBWElement, center: CommPoly, trunc: usize) -> Result<Self> {
        let mut out = Self::new(center, trunc)?;
        for (m, f) in e.terms() {
            out.add_term(m.clone(), LocalizedElement::from_poly(f.clone(), out.center.clone())?)?;
        }
        Ok(out)
    }

    pub fn center(&self) -> &CommPoly {
        &self.center
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BracketMonomial, &LocalizedElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &BracketMonomial) -> LocalizedElement {
        self.terms.get(m).cloned().unwrap_or_else(|| {
            LocalizedElement::from_poly(CommPoly::zero(self.center.nvars()), self.center.clone())
                .expect("center is nonzero")
        })
    }

    /// Adds a term; terms with `ord >= trunc` are dropped.
    pub fn add_term(&mut self, m: BracketMonomial, g: LocalizedElement) -> Result<()> {
        if g.center() != &self.center {
            return Err(Error::CenterMismatch);
        }
        if m.ord >= self.trunc {
            return Ok(());
        }
        let sum = match self.terms.remove(&m) {
            Some(h) => h.checked_add(&g)?,
            None => g,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
        Ok(())
    }

    /// The polynomial part, if every coefficient has a trivial denominator.
    pub fn to_pbw(&self) -> Option<PBWElement> {
        let d = self.center.nvars();
        let terms = self.terms.iter().map(|(m, g)| (g.power() == 0).then(|| (m.clone(), g.numerator().clone())));
        PBWElement::from_terms(d, terms.collect::<Option<Vec<_>>>()?).ok()
    }

    pub fn display(&self, basis: &HallBasis) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, g)| if m.is_empty() { format!("[[{g}]]") } else { format!("[[{g}]]*{}", m.display(basis)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn formal_section_mul(a: &FormalSection, b: &FormalSection, table: &OperatorTable<'_>) -> Result<FormalSection> {
    if a.center != b.center {
        return Err(Error::CenterMismatch);
    }
    if a.trunc != b.trunc {
        return Err(Error::TruncationMismatch { left: a.trunc, right: b.trunc });
    }
    if table.trunc != a.trunc {
        return Err(Error::TruncationMismatch { left: a.trunc, right: table.trunc });
    }
    let mut out = FormalSection::new(a.center.clone(), a.trunc)?;
    for (l, f) in &a.terms {
        for (m, g) in &b.terms {
            if l.ord + m.ord >= a.trunc {
                continue;
            }
            for (nu, op) in table.operators(l, m)?.iter() {
                out.add_term(nu.clone(), op.apply(f, g)?)?;
            }
        }
    }
    Ok(out)
}
