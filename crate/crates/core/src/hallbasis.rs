//! The ordered Hall basis of the free Lie algebra on `x1, ..., xd`.
//!
//! Layers are built bottom-up:
//!
//! - `B_1 = (x1 < ... < xd)`
//! - `B_2 = { [xi, xj] : j < i }`
//! - `B_k = { [t, w] : t = [u, v] in B_l (l >= 2), w in B_{k-l}, v <= w < t }`
//!
//! Inside a layer `[t, w] < [t', w']` iff `w < w'`, or `w = w'` and `t < t'`,
//! and lower layers precede higher ones. Every element gets a global position
//! in this order (0-based in the API, 1-based in serialized output).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{axpy, SparseEchelon, SparseVec};
use crate::ncpoly::{nc_commutator, NCPoly, Rational, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HallTree {
    Leaf(u32),
    Bracket(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallElement {
    pub tree: HallTree,
    pub weight: usize,
    pub index: usize,
}

impl HallElement {
    pub fn ord(&self) -> usize {
        self.weight - 1
    }
}

/// A finite linear combination of basis elements, keyed by global position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LieElement {
    terms: BTreeMap<usize, Rational>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self::from_terms([(i, Rational::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut out = Self::zero();
        for (i, c) in terms {
            out.add_term(i, c);
        }
        out
    }

    pub fn add_term(&mut self, i: usize, c: Rational) {
        let e = self.terms.entry(i).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.terms.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&i, c) in &other.terms {
            out.add_term(i, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&i, v)| (i, v * c)))
    }
}

pub struct HallBasis {
    d: usize,
    max_weight: usize,
    elements: Vec<HallElement>,
    /// `layer_start[k - 1]..layer_start[k]` are the positions of `B_k`.
    layer_start: Vec<usize>,
    pairs: HashMap<(usize, usize), usize>,
    words: Vec<NCPoly>,
    solvers: Vec<OnceLock<SparseEchelon<Word>>>,
    brackets: Mutex<HashMap<(usize, usize), LieElement>>,
}

impl fmt::Debug for HallBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HallBasis")
            .field("d", &self.d)
            .field("max_weight", &self.max_weight)
            .field("len", &self.elements.len())
            .finish()
    }
}

pub fn generate_basis(d: usize, max_weight: usize) -> Result<HallBasis> {
    HallBasis::new(d, max_weight)
}

impl HallBasis {
    pub fn new(d: usize, max_weight: usize) -> Result<Self> {
        if d == 0 || max_weight == 0 {
            return Err(Error::InvalidArgument("d and the weight bound must be positive".into()));
        }
        let mut elements: Vec<HallElement> = Vec::new();
        let mut layer_start = vec![0];
        for i in 1..=d {
            elements.push(HallElement { tree: HallTree::Leaf(i as u32), weight: 1, index: i - 1 });
        }
        layer_start.push(elements.len());
        for k in 2..=max_weight {
            // candidates as (w, t) so that sorting gives the layer order
            let mut cand: Vec<(usize, usize)> = Vec::new();
            if k == 2 {
                for i in 0..d {
                    for j in 0..i {
                        cand.push((j, i));
                    }
                }
            } else {
                for l in 2..k {
                    for t in layer_start[l - 1]..layer_start[l] {
                        let HallTree::Bracket(_, v) = elements[t].tree else { unreachable!() };
                        for w in layer_start[k - l - 1]..layer_start[k - l] {
                            if v <= w && w < t {
                                cand.push((w, t));
                            }
                        }
                    }
                }
            }
            cand.sort_unstable();
            for (w, t) in cand {
                let index = elements.len();
                elements.push(HallElement { tree: HallTree::Bracket(t, w), weight: k, index });
            }
            layer_start.push(elements.len());
        }
        let mut pairs = HashMap::new();
        let mut words: Vec<NCPoly> = Vec::with_capacity(elements.len());
        for e in &elements {
            let p = match e.tree {
                HallTree::Leaf(i) => NCPoly::generator(d, i as usize)?,
                HallTree::Bracket(t, w) => {
                    pairs.insert((t, w), e.index);
                    nc_commutator(&words[t], &words[w])?
                }
            };
            words.push(p);
        }
        Ok(HallBasis {
            d,
            max_weight,
            elements,
            layer_start,
            pairs,
            words,
            solvers: (0..max_weight).map(|_| OnceLock::new()).collect(),
            brackets: Mutex::new(HashMap::new()),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HallElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> Result<&HallElement> {
        self.elements.get(i).ok_or(Error::UnknownBasisElement(i))
    }

    pub fn weight(&self, i: usize) -> usize {
        self.elements[i].weight
    }

    pub fn ord(&self, i: usize) -> usize {
        self.elements[i].weight - 1
    }

    /// The elements of `B_k`, or an empty slice outside `1..=max_weight`.
    pub fn layer(&self, k: usize) -> &[HallElement] {
        if k == 0 || k > self.max_weight {
            return &[];
        }
        &self.elements[self.layer_start[k - 1]..self.layer_start[k]]
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        (1..=self.max_weight).map(|k| self.layer(k).len()).collect()
    }

    /// Position of the leaf `x_i` (1-based generator index).
    pub fn leaf(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.d {
            return Err(Error::GeneratorOutOfRange { index: i, d: self.d });
        }
        Ok(i - 1)
    }

    /// Position of the basis element `[t, w]`, if that pair is basic.
    pub fn pair(&self, t: usize, w: usize) -> Option<usize> {
        self.pairs.get(&(t, w)).copied()
    }

    /// The `j` in `b_j`, numbering the elements of weight at least two from 1.
    pub fn bracket_number(&self, i: usize) -> Option<usize> {
        (self.elements.get(i)?.weight >= 2).then(|| i - self.d + 1)
    }

    pub fn sexpr(&self, i: usize) -> String {
        match self.elements[i].tree {
            HallTree::Leaf(g) => format!("x{g}"),
            HallTree::Bracket(t, w) => format!("[{},{}]", self.sexpr(t), self.sexpr(w)),
        }
    }

    pub fn expand_to_words(&self, i: usize) -> Result<&NCPoly> {
        self.words.get(i).ok_or(Error::UnknownBasisElement(i))
    }

    pub fn expand_lie(&self, a: &LieElement) -> Result<NCPoly> {
        let mut out = NCPoly::zero(self.d);
        for (i, c) in a.terms() {
            out = out.checked_add(&self.expand_to_words(i)?.scale(c))?;
        }
        Ok(out)
    }

    fn solver(&self, k: usize) -> &SparseEchelon<Word> {
        self.solvers[k - 1].get_or_init(|| {
            let mut e = SparseEchelon::new();
            for el in self.layer(k) {
                let v: SparseVec<Word> =
                    self.words[el.index].terms().map(|(w, c)| (w.clone(), c.clone())).collect();
                let independent = e.insert(v);
                debug_assert!(independent);
            }
            e
        })
    }

    /// Writes a homogeneous Lie polynomial of weight `k` in the basis `B_k`.
    pub fn solve_in_layer(&self, p: &NCPoly, k: usize) -> Result<LieElement> {
        if k > self.max_weight {
            return Err(Error::WeightOverflow { weight: k, max: self.max_weight });
        }
        let v: SparseVec<Word> = p.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        let combo = self
            .solver(k)
            .solve(v)
            .ok_or_else(|| Error::InvalidArgument("polynomial is not a Lie element of the given weight".into()))?;
        let start = self.layer_start[k - 1];
        Ok(LieElement::from_terms(combo.into_iter().map(|(j, c)| (start + j, c))))
    }

    /// Basis expansion of `[e_i, e_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> Result<LieElement> {
        self.element(i)?;
        self.element(j)?;
        let weight = self.weight(i) + self.weight(j);
        if weight > self.max_weight {
            return Err(Error::WeightOverflow { weight, max: self.max_weight });
        }
        if i == j {
            return Ok(LieElement::zero());
        }
        if let Some(p) = self.pair(i, j) {
            return Ok(LieElement::basis(p));
        }
        if let Some(p) = self.pair(j, i) {
            return Ok(LieElement::from_terms([(p, -Rational::one())]));
        }
        if let Some(hit) = self.brackets.lock().expect("bracket cache poisoned").get(&(i, j)) {
            return Ok(hit.clone());
        }
        let comm = nc_commutator(&self.words[i], &self.words[j])?;
        let out = self.solve_in_layer(&comm, weight)?;
        let mut cache = self.brackets.lock().expect("bracket cache poisoned");
        cache.insert((j, i), out.scale(&-Rational::one()));
        cache.insert((i, j), out.clone());
        Ok(out)
    }

    pub fn bracket_normalize(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        let mut acc: SparseVec<usize> = SparseVec::new();
        for (i, ci) in a.terms() {
            for (j, cj) in b.terms() {
                let br = self.bracket(i, j)?;
                axpy(&mut acc, &(ci * cj), &br.terms);
            }
        }
        Ok(LieElement { terms: acc })
    }
}

/// Rank of the span of the right-normed commutators `[x_{i1}, [x_{i2}, ... x_{ik}]]`
/// inside the degree-`k` words, by direct elimination.
pub fn lie_rank(d: usize, k: usize) -> usize {
    if d == 0 || k == 0 {
        return 0;
    }
    let gens: Vec<NCPoly> =
        (1..=d).map(|i| NCPoly::generator(d, i).expect("index in range")).collect();
    let mut layer: Vec<NCPoly> = gens.clone();
    for _ in 1..k {
        let mut next = Vec::with_capacity(layer.len() * d);
        for g in &gens {
            for p in &layer {
                next.push(nc_commutator(g, p).expect("same alphabet"));
            }
        }
        layer = next;
    }
    let mut e = SparseEchelon::new();
    for p in layer.into_iter().filter(|p| !p.is_zero()) {
        e.insert(p.terms().map(|(w, c)| (w.clone(), c.clone())).collect());
    }
    e.rank()
}

/// Witt's formula for the dimension of the degree-`k` part of the free Lie
/// algebra on `d` generators.
pub fn witt_dimension(d: usize, k: usize) -> usize {
    fn mobius(mut n: usize) -> i64 {
        let mut sign = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if n > 1 {
            sign = -sign;
        }
        sign
    }
    let total: i64 = (1..=k)
        .filter(|e| k.is_multiple_of(*e))
        .map(|e| mobius(k / e) * (d as i64).pow(e as u32))
        .sum();
    (total / k as i64) as usize
}
