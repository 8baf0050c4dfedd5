//! Canonical Hermitian summands of a Hamiltonian and their ordering.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::hamiltonian::{Monomial, SpinOrbitalHamiltonian};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TermClass {
    /// `h n_p`
    OneBodyDiag,
    /// `h (c†_p c_q + c†_q c_p)`
    OneBodyOffDiag,
    /// `V n_p n_q`
    NumberNumber,
    /// `W (c†_p c_q + c†_q c_p) n_r`
    ThreeIndex,
    /// `Σ_k v_k (A_k + A_k†)` over the three pairings of four distinct modes.
    FourIndex,
}

impl TermClass {
    /// Diagonal in the occupation-number basis.
    pub fn is_diagonal(self) -> bool {
        matches!(self, TermClass::OneBodyDiag | TermClass::NumberNumber)
    }

    pub fn label(self) -> &'static str {
        match self {
            TermClass::OneBodyDiag => "one_body_diag",
            TermClass::OneBodyOffDiag => "one_body_off_diag",
            TermClass::NumberNumber => "number_number",
            TermClass::ThreeIndex => "three_index",
            TermClass::FourIndex => "four_index",
        }
    }
}

/// The three ways to split sorted modes `a<b<c<d` into a creation pair holding
/// `a` and an annihilation pair: `(ab|cd)`, `(ac|bd)`, `(ad|bc)`.
pub const PAIRINGS: [([usize; 2], [usize; 2]); 3] =
    [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])];

/// One Hermitian summand.
///
/// Index layout per class:
/// - `OneBodyDiag`: `[p]`
/// - `OneBodyOffDiag`, `NumberNumber`: `[p, q]` with `p < q`
/// - `ThreeIndex`: `[p, q, r]` with `p < q` the hopping pair and `r` the
///   number-operator mode
/// - `FourIndex`: `[a, b, c, d]` strictly increasing
///
/// `coefficients` holds one value, except for `FourIndex` which holds one per
/// entry of [`PAIRINGS`]. Pairing `k` with creation pair `(x, y)` and
/// annihilation pair `(z, w)` (both ascending) contributes
/// `v_k (c†_x c†_y c_w c_z + c†_z c†_w c_y c_x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    class: TermClass,
    indices: Vec<usize>,
    coefficients: Vec<f64>,
    norm: f64,
}

impl Term {
    pub fn one_body_diag(p: usize, coefficient: f64) -> Self {
        Self::build(TermClass::OneBodyDiag, vec![p], vec![coefficient])
    }

    pub fn one_body_off_diag(p: usize, q: usize, coefficient: f64) -> Self {
        assert_ne!(p, q, "hopping needs two distinct modes");
        Self::build(
            TermClass::OneBodyOffDiag,
            vec![p.min(q), p.max(q)],
            vec![coefficient],
        )
    }

    pub fn number_number(p: usize, q: usize, coefficient: f64) -> Self {
        assert_ne!(p, q, "number-number term needs two distinct modes");
        Self::build(
            TermClass::NumberNumber,
            vec![p.min(q), p.max(q)],
            vec![coefficient],
        )
    }

    pub fn three_index(p: usize, q: usize, r: usize, coefficient: f64) -> Self {
        assert!(
            p != q && p != r && q != r,
            "three-index term needs distinct modes"
        );
        Self::build(
            TermClass::ThreeIndex,
            vec![p.min(q), p.max(q), r],
            vec![coefficient],
        )
    }

    /// `modes` must be strictly increasing.
    pub fn four_index(modes: [usize; 4], channels: [f64; 3]) -> Self {
        assert!(
            modes.windows(2).all(|w| w[0] < w[1]),
            "four-index modes must be strictly increasing"
        );
        Self::build(TermClass::FourIndex, modes.to_vec(), channels.to_vec())
    }

    fn build(class: TermClass, indices: Vec<usize>, coefficients: Vec<f64>) -> Self {
        let mut t = Self {
            class,
            indices,
            coefficients,
            norm: 0.0,
        };
        t.norm = term_norm(&t);
        t
    }

    pub fn class(&self) -> TermClass {
        self.class
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// The coefficient of largest magnitude; the only one unless the term is a
    /// `FourIndex` term with several pairings.
    pub fn coefficient(&self) -> f64 {
        self.coefficients
            .iter()
            .copied()
            .fold(0.0, |acc, v| if v.abs() > acc.abs() { v } else { acc })
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Same class and indices, regardless of coefficients.
    pub fn same_slot(&self, other: &Term) -> bool {
        self.class == other.class && self.indices == other.indices
    }

    /// Modes whose occupation the term changes.
    pub fn odd_modes(&self) -> &[usize] {
        match self.class {
            TermClass::OneBodyDiag | TermClass::NumberNumber => &[],
            TermClass::OneBodyOffDiag | TermClass::ThreeIndex => &self.indices[..2],
            TermClass::FourIndex => &self.indices,
        }
    }

    /// The term written out as ladder monomials.
    pub fn monomials(&self) -> Vec<Monomial> {
        let c = &self.coefficients;
        let i = &self.indices;
        match self.class {
            TermClass::OneBodyDiag => vec![Monomial::new(c[0], &[i[0]], &[i[0]])],
            TermClass::OneBodyOffDiag => vec![
                Monomial::new(c[0], &[i[0]], &[i[1]]),
                Monomial::new(c[0], &[i[1]], &[i[0]]),
            ],
            TermClass::NumberNumber => vec![Monomial::new(c[0], &[i[0], i[1]], &[i[1], i[0]])],
            TermClass::ThreeIndex => {
                let (p, q, r) = (i[0], i[1], i[2]);
                vec![
                    Monomial::new(c[0], &[p, r], &[r, q]),
                    Monomial::new(c[0], &[q, r], &[r, p]),
                ]
            }
            TermClass::FourIndex => {
                let mut out = Vec::new();
                for (k, (cre, ann)) in PAIRINGS.iter().enumerate() {
                    if c[k] == 0.0 {
                        continue;
                    }
                    let (x, y) = (i[cre[0]], i[cre[1]]);
                    let (z, w) = (i[ann[0]], i[ann[1]]);
                    out.push(Monomial::new(c[k], &[x, y], &[w, z]));
                    out.push(Monomial::new(c[k], &[z, w], &[y, x]));
                }
                out
            }
        }
    }
}

/// Operator-norm proxy of a term.
///
/// Exact for every single-coefficient term; for `FourIndex` terms it is the sum
/// of the channel magnitudes, an upper bound that is exact for one channel.
pub fn term_norm(t: &Term) -> f64 {
    t.coefficients.iter().map(|v| v.abs()).sum()
}

/// Conservative commutation test: `true` only when the terms provably commute.
pub fn terms_commute(a: &Term, b: &Term) -> bool {
    if a.same_slot(b) || (a.class.is_diagonal() && b.class.is_diagonal()) {
        return true;
    }
    !a.indices.iter().any(|i| b.indices.contains(i))
}

/// A permutation of term positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermOrder(Vec<usize>);

impl TermOrder {
    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    /// Returns `None` unless `sequence` is a permutation of `0..len`.
    pub fn from_sequence(sequence: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; sequence.len()];
        for &i in &sequence {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Self(sequence))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

/// Diagonal terms first, then each hopping pair followed by the three-index
/// terms sharing its pair, then the four-index terms, each block in ascending
/// index order.
pub fn interleaved_order(terms: &[Term]) -> TermOrder {
    let mut diagonal = Vec::new();
    let mut by_pair: BTreeMap<(usize, usize), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    let mut four = Vec::new();
    for (pos, t) in terms.iter().enumerate() {
        match t.class {
            TermClass::OneBodyDiag | TermClass::NumberNumber => diagonal.push(pos),
            TermClass::OneBodyOffDiag => {
                by_pair
                    .entry((t.indices[0], t.indices[1]))
                    .or_default()
                    .0
                    .push(pos);
            }
            TermClass::ThreeIndex => by_pair
                .entry((t.indices[0], t.indices[1]))
                .or_default()
                .1
                .push(pos),
            TermClass::FourIndex => four.push(pos),
        }
    }
    let key = |&pos: &usize| (terms[pos].indices.clone(), terms[pos].class);
    diagonal.sort_by_key(key);
    four.sort_by_key(key);
    let mut seq = diagonal;
    for (_, (hop, mut threes)) in by_pair {
        seq.extend(hop);
        threes.sort_by_key(key);
        seq.extend(threes);
    }
    seq.extend(four);
    TermOrder(seq)
}

#[derive(Default)]
struct Accumulator {
    diag: BTreeMap<usize, f64>,
    hop: BTreeMap<(usize, usize), [f64; 2]>,
    number: BTreeMap<(usize, usize), f64>,
    three: BTreeMap<(usize, usize, usize), [f64; 2]>,
    four: BTreeMap<[usize; 4], [[f64; 2]; 3]>,
}

fn swap_sign(first_matches: bool) -> f64 {
    if first_matches {
        1.0
    } else {
        -1.0
    }
}

impl Accumulator {
    fn one_body(&mut self, p: usize, q: usize, v: f64) {
        if p == q {
            *self.diag.entry(p).or_default() += v;
        } else {
            let slot = self.hop.entry((p.min(q), p.max(q))).or_default();
            slot[usize::from(p > q)] += v;
        }
    }

    fn two_body(&mut self, [p, q, r, s]: [usize; 4], v: f64) {
        let mut modes = [p, q, r, s];
        modes.sort_unstable();
        let mut distinct = modes.to_vec();
        distinct.dedup();
        match distinct.len() {
            2 => {
                // c†_p c†_q c_r c_s = ± n_x n_y
                let (x, y) = (distinct[0], distinct[1]);
                let sign = swap_sign(p == x) * swap_sign(r == y);
                *self.number.entry((x, y)).or_default() += sign * v;
            }
            3 => {
                // c†_p c†_q c_r c_s = ± c†_a c_b n_m with m the repeated mode
                let m = if p == r || p == s { p } else { q };
                let a = if p == m { q } else { p };
                let b = if r == m { s } else { r };
                let sign = swap_sign(q == m) * swap_sign(r == m);
                let slot = self.three.entry((a.min(b), a.max(b), m)).or_default();
                slot[usize::from(a > b)] += sign * v;
            }
            4 => {
                let [a, b, c, d] = modes;
                let forward = p == a || q == a;
                let (pair, other) = if forward {
                    ([p, q], [r, s])
                } else {
                    ([r, s], [p, q])
                };
                let partner = if pair[0] == a { pair[1] } else { pair[0] };
                let k = if partner == b {
                    0
                } else if partner == c {
                    1
                } else {
                    2
                };
                let sign = if forward {
                    // canonical c†_a c†_partner c_w c_z with z < w
                    let w = other[0].max(other[1]);
                    swap_sign(p == a) * swap_sign(r == w)
                } else {
                    // canonical c†_z c†_w c_partner c_a
                    let z = other[0].min(other[1]);
                    swap_sign(p == z) * swap_sign(r == partner)
                };
                self.four.entry([a, b, c, d]).or_default()[k][usize::from(!forward)] += sign * v;
            }
            _ => unreachable!("validated quartets have distinct creation and annihilation indices"),
        }
    }

    fn finish(self) -> Vec<Term> {
        let herm = |[fwd, back]: [f64; 2]| (fwd + back) / 2.0;
        let mut out = Vec::new();
        out.extend(
            self.diag
                .into_iter()
                .filter(|&(_, v)| v != 0.0)
                .map(|(p, v)| Term::one_body_diag(p, v)),
        );
        out.extend(self.hop.into_iter().filter_map(|((p, q), s)| {
            let v = herm(s);
            (v != 0.0).then(|| Term::one_body_off_diag(p, q, v))
        }));
        out.extend(
            self.number
                .into_iter()
                .filter(|&(_, v)| v != 0.0)
                .map(|((p, q), v)| Term::number_number(p, q, v)),
        );
        out.extend(self.three.into_iter().filter_map(|((p, q, r), s)| {
            let v = herm(s);
            (v != 0.0).then(|| Term::three_index(p, q, r, v))
        }));
        out.extend(self.four.into_iter().filter_map(|(modes, ch)| {
            let v = [herm(ch[0]), herm(ch[1]), herm(ch[2])];
            v.iter()
                .any(|&x| x != 0.0)
                .then(|| Term::four_index(modes, v))
        }));
        out
    }
}

/// Splits `H` into canonical Hermitian terms (core energy excluded).
///
/// Output order: one-body diagonal, one-body hopping, number-number,
/// three-index, four-index, each ascending by indices.
pub fn enumerate_terms(h: &SpinOrbitalHamiltonian) -> Vec<Term> {
    let mut acc = Accumulator::default();
    let n = h.n_orbitals();
    let one = h.one_body();
    for p in 0..n {
        for q in 0..n {
            if one[(p, q)] != 0.0 {
                acc.one_body(p, q, one[(p, q)]);
            }
        }
    }
    for (&k, &v) in h.two_body() {
        acc.two_body(k, v);
    }
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::TwoBody;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn orbit(entries: &[([usize; 4], f64)]) -> TwoBody {
        let mut out = TwoBody::new();
        for &([p, q, r, s], v) in entries {
            for k in [[p, q, r, s], [q, p, s, r], [s, r, q, p], [r, s, p, q]] {
                out.insert(k, v);
            }
        }
        out
    }

    #[test]
    fn single_hopping_is_one_term() {
        let mut one = DMatrix::zeros(3, 3);
        one[(0, 1)] = 0.5;
        one[(1, 0)] = 0.5;
        let h = SpinOrbitalHamiltonian::new(3, one, TwoBody::new(), 0.0).unwrap();
        let terms = enumerate_terms(&h);
        assert_eq!(terms, vec![Term::one_body_off_diag(0, 1, 0.5)]);
    }

    #[test]
    fn pqqp_is_a_number_term() {
        let h = SpinOrbitalHamiltonian::new(
            3,
            DMatrix::zeros(3, 3),
            orbit(&[([0, 1, 1, 0], 0.25)]),
            0.0,
        )
        .unwrap();
        let terms = enumerate_terms(&h);
        // h_0110 and h_1001 each give n_0 n_1
        assert_eq!(terms, vec![Term::number_number(0, 1, 0.5)]);
    }

    #[test]
    fn exchange_sign_on_number_terms() {
        let h = SpinOrbitalHamiltonian::new(
            2,
            DMatrix::zeros(2, 2),
            orbit(&[([0, 1, 0, 1], 0.25)]),
            0.0,
        )
        .unwrap();
        assert_eq!(enumerate_terms(&h), vec![Term::number_number(0, 1, -0.5)]);
    }

    #[test]
    fn quartets_on_one_set_group_into_one_term() {
        let h = SpinOrbitalHamiltonian::new(
            4,
            DMatrix::zeros(4, 4),
            orbit(&[([0, 1, 2, 3], 0.2), ([0, 2, 1, 3], -0.1)]),
            0.0,
        )
        .unwrap();
        let terms = enumerate_terms(&h);
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].class(), TermClass::FourIndex);
        // c†_0 c†_1 c_2 c_3 = -c†_0 c†_1 c_3 c_2 and c†_0 c†_2 c_1 c_3 = -c†_0 c†_2 c_3 c_1
        assert_eq!(terms[0].coefficients(), &[-0.4, 0.2, 0.0]);
    }

    #[test]
    fn term_norm_examples() {
        assert_eq!(Term::four_index([0, 1, 2, 3], [-0.3, 0.0, 0.0]).norm(), 0.3);
        assert_eq!(Term::number_number(0, 1, 0.0).norm(), 0.0);
        assert_eq!(
            Term::four_index([0, 1, 2, 3], [0.1, -0.2, 0.3]).norm(),
            0.6000000000000001
        );
    }

    #[test]
    fn commutation_predicate() {
        let a = Term::four_index([0, 1, 2, 3], [0.1, 0.0, 0.0]);
        assert!(terms_commute(
            &a,
            &Term::four_index([4, 5, 6, 7], [0.1, 0.0, 0.0])
        ));
        assert!(!terms_commute(
            &a,
            &Term::four_index([0, 4, 5, 6], [0.1, 0.0, 0.0])
        ));
        assert!(terms_commute(&a, &a));
        assert!(terms_commute(
            &Term::number_number(0, 1, 1.0),
            &Term::one_body_diag(0, 1.0)
        ));
        assert!(!terms_commute(
            &Term::number_number(0, 1, 1.0),
            &Term::one_body_off_diag(0, 2, 1.0)
        ));
    }

    #[test]
    fn interleaved_order_example() {
        let terms = vec![
            Term::four_index([0, 1, 2, 3], [0.1, 0.0, 0.0]),
            Term::three_index(0, 2, 1, 0.1),
            Term::number_number(0, 1, 0.1),
            Term::one_body_off_diag(0, 1, 0.1),
            Term::one_body_diag(0, 0.1),
            Term::three_index(0, 1, 2, 0.1),
            Term::one_body_off_diag(0, 2, 0.1),
        ];
        let order = interleaved_order(&terms);
        assert_eq!(order.as_slice(), &[4, 2, 3, 5, 6, 1, 0]);
        assert!(interleaved_order(&[]).is_empty());
    }

    proptest! {
        #[test]
        fn interleaved_order_is_a_permutation(
            picks in prop::collection::vec((0usize..5, 0usize..6, 0usize..6, 0usize..6), 0..40)
        ) {
            let terms: Vec<Term> = picks
                .into_iter()
                .filter_map(|(class, p, q, r)| match class {
                    0 => Some(Term::one_body_diag(p, 1.0)),
                    1 if p != q => Some(Term::one_body_off_diag(p, q, 1.0)),
                    2 if p != q => Some(Term::number_number(p, q, 1.0)),
                    3 if p != q && q != r && p != r => Some(Term::three_index(p, q, r, 1.0)),
                    4 if p < q && q < r && r < 6 => Some(Term::four_index([p, q, r, 6], [1.0, 0.0, 0.0])),
                    _ => None,
                })
                .collect();
            let order = interleaved_order(&terms);
            prop_assert!(TermOrder::from_sequence(order.into_inner()).map(|o| o.len()) == Some(terms.len()));
        }
    }
}
