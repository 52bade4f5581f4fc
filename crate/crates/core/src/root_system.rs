//! Finite crystallographic root systems in simple-root coordinates.
//!
//! Every vector lives in the basis of simple roots and inner products go
//! through a rational Gram matrix normalised so that long roots have squared
//! length 2. This keeps `G2` and `F4` exact without irrational embeddings.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det_i64, Matrix};
use crate::rational::{q, qi, ser, Q};

/// Cap on full Weyl group enumeration. `E6` (51840) fits; `E7` and `E8` do not.
pub const DEFAULT_WEYL_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeLabel {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl TypeLabel {
    /// The eight types singled out by the classification, in order of central charge.
    pub const DELIGNE: [TypeLabel; 8] = [
        TypeLabel::A(1),
        TypeLabel::A(2),
        TypeLabel::G2,
        TypeLabel::D(4),
        TypeLabel::F4,
        TypeLabel::E6,
        TypeLabel::E7,
        TypeLabel::E8,
    ];

    pub fn rank(self) -> usize {
        match self {
            TypeLabel::A(n) | TypeLabel::B(n) | TypeLabel::C(n) | TypeLabel::D(n) => n,
            TypeLabel::E6 => 6,
            TypeLabel::E7 => 7,
            TypeLabel::E8 => 8,
            TypeLabel::F4 => 4,
            TypeLabel::G2 => 2,
        }
    }

    pub fn validate(self) -> Result<Self> {
        let ok = match self {
            TypeLabel::A(n) => n >= 1,
            TypeLabel::B(n) | TypeLabel::C(n) => n >= 2,
            TypeLabel::D(n) => n >= 4,
            _ => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::UnsupportedType(self.to_string()))
        }
    }

    /// Dimension of the simple Lie algebra from the closed formulas.
    pub fn dimension(self) -> usize {
        match self {
            TypeLabel::A(n) => n * n + 2 * n,
            TypeLabel::B(n) | TypeLabel::C(n) => 2 * n * n + n,
            TypeLabel::D(n) => 2 * n * n - n,
            TypeLabel::E6 => 78,
            TypeLabel::E7 => 133,
            TypeLabel::E8 => 248,
            TypeLabel::F4 => 52,
            TypeLabel::G2 => 14,
        }
    }

    /// Dual Coxeter number from the classical table.
    pub fn dual_coxeter_table(self) -> usize {
        match self {
            TypeLabel::A(n) => n + 1,
            TypeLabel::B(n) => 2 * n - 1,
            TypeLabel::C(n) => n + 1,
            TypeLabel::D(n) => 2 * n - 2,
            TypeLabel::E6 => 12,
            TypeLabel::E7 => 18,
            TypeLabel::E8 => 30,
            TypeLabel::F4 => 9,
            TypeLabel::G2 => 4,
        }
    }

    /// Order of the Weyl group from the product-of-degrees formula.
    pub fn weyl_order(self) -> u128 {
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        match self {
            TypeLabel::A(n) => fact(n + 1),
            TypeLabel::B(n) | TypeLabel::C(n) => (1u128 << n) * fact(n),
            TypeLabel::D(n) => (1u128 << (n - 1)) * fact(n),
            TypeLabel::E6 => 51_840,
            TypeLabel::E7 => 2_903_040,
            TypeLabel::E8 => 696_729_600,
            TypeLabel::F4 => 1_152,
            TypeLabel::G2 => 12,
        }
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self, TypeLabel::A(_) | TypeLabel::D(_) | TypeLabel::E6 | TypeLabel::E7 | TypeLabel::E8)
    }

    /// Gram matrix `(α_i, α_j)` in Bourbaki numbering.
    fn gram(self) -> Matrix {
        let r = self.rank();
        let mut g = Matrix::zeros(r, r);
        let link = |g: &mut Matrix, i: usize, j: usize, v: Q| {
            g[(i, j)] = v.clone();
            g[(j, i)] = v;
        };
        for i in 0..r {
            g[(i, i)] = qi(2);
        }
        match self {
            TypeLabel::A(n) => {
                for i in 0..n - 1 {
                    link(&mut g, i, i + 1, qi(-1));
                }
            }
            TypeLabel::B(n) => {
                for i in 0..n - 1 {
                    link(&mut g, i, i + 1, qi(-1));
                }
                g[(n - 1, n - 1)] = qi(1);
            }
            TypeLabel::C(n) => {
                for i in 0..n - 1 {
                    g[(i, i)] = qi(1);
                }
                for i in 0..n - 2 {
                    link(&mut g, i, i + 1, q(-1, 2));
                }
                link(&mut g, n - 2, n - 1, qi(-1));
            }
            TypeLabel::D(n) => {
                for i in 0..n - 2 {
                    link(&mut g, i, i + 1, qi(-1));
                }
                link(&mut g, n - 3, n - 1, qi(-1));
            }
            TypeLabel::E6 | TypeLabel::E7 | TypeLabel::E8 => {
                // 1-3-4-5-6-7-8 with 2 attached to 4 (Bourbaki, zero-based below).
                link(&mut g, 0, 2, qi(-1));
                link(&mut g, 1, 3, qi(-1));
                for i in 2..r - 1 {
                    link(&mut g, i, i + 1, qi(-1));
                }
            }
            TypeLabel::F4 => {
                g[(2, 2)] = qi(1);
                g[(3, 3)] = qi(1);
                link(&mut g, 0, 1, qi(-1));
                link(&mut g, 1, 2, qi(-1));
                link(&mut g, 2, 3, q(-1, 2));
            }
            TypeLabel::G2 => {
                g[(0, 0)] = q(2, 3);
                link(&mut g, 0, 1, qi(-1));
            }
        }
        g
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLabel::A(n) => write!(f, "A{n}"),
            TypeLabel::B(n) => write!(f, "B{n}"),
            TypeLabel::C(n) => write!(f, "C{n}"),
            TypeLabel::D(n) => write!(f, "D{n}"),
            TypeLabel::E6 => f.write_str("E6"),
            TypeLabel::E7 => f.write_str("E7"),
            TypeLabel::E8 => f.write_str("E8"),
            TypeLabel::F4 => f.write_str("F4"),
            TypeLabel::G2 => f.write_str("G2"),
        }
    }
}

impl FromStr for TypeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedType(s.to_string());
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        let t = match (letter, n) {
            ('A', n) => TypeLabel::A(n),
            ('B', n) => TypeLabel::B(n),
            ('C', n) => TypeLabel::C(n),
            ('D', n) => TypeLabel::D(n),
            ('E', 6) => TypeLabel::E6,
            ('E', 7) => TypeLabel::E7,
            ('E', 8) => TypeLabel::E8,
            ('F', 4) => TypeLabel::F4,
            ('G', 2) => TypeLabel::G2,
            _ => return Err(bad()),
        };
        t.validate().map_err(|_| bad())
    }
}

impl Serialize for TypeLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSystem {
    pub type_label: TypeLabel,
    pub rank: usize,
    #[serde(serialize_with = "ser_matrix")]
    pub gram: Matrix,
    /// Ordered by height, then lexicographically.
    pub positive_roots: Vec<Vec<i64>>,
    #[serde(serialize_with = "ser::vec")]
    pub rho: Vec<Q>,
    pub highest_root: Vec<i64>,
    pub dual_coxeter: usize,
    /// `cartan[i][j] = 2(α_i, α_j)/(α_j, α_j) = <α_i, α_j^∨>`.
    #[serde(skip)]
    pub cartan: Vec<Vec<i64>>,
    #[serde(skip)]
    root_index: HashMap<Vec<i64>, usize>,
}

fn ser_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    ser::matrix(&m.to_rows(), s)
}

pub fn build_root_system(type_label: TypeLabel) -> Result<RootSystem> {
    let type_label = type_label.validate()?;
    let rank = type_label.rank();
    let gram = type_label.gram();
    let cartan: Vec<Vec<i64>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    let v = qi(2) * &gram[(i, j)] / &gram[(j, j)];
                    v.to_integer().to_i64().expect("integral Cartan entry")
                })
                .collect()
        })
        .collect();

    // Closure by height via root strings: β + α_i is a root iff p - <β, α_i^∨> > 0,
    // where p is the length of the α_i-string below β.
    let unit = |i: usize| {
        let mut v = vec![0i64; rank];
        v[i] = 1;
        v
    };
    let mut known: HashSet<Vec<i64>> = (0..rank).map(unit).collect();
    let mut layer: Vec<Vec<i64>> = (0..rank).map(unit).collect();
    let mut positive = layer.clone();
    while !layer.is_empty() {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &layer {
            for i in 0..rank {
                if *beta == unit(i) {
                    continue;
                }
                let pairing: i64 = (0..rank).map(|j| beta[j] * cartan[j][i]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        for r in &next {
            known.insert(r.clone());
        }
        positive.extend(next.iter().cloned());
        layer = next;
    }
    positive.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| a.cmp(b)));

    let mut rho = vec![Q::zero(); rank];
    for r in &positive {
        for (x, &c) in rho.iter_mut().zip(r) {
            *x += qi(c);
        }
    }
    for x in &mut rho {
        *x /= qi(2);
    }

    let top = positive.iter().map(|r| height(r)).max().unwrap_or(0);
    let tops: Vec<&Vec<i64>> = positive.iter().filter(|r| height(r) == top).collect();
    if tops.len() != 1 {
        return Err(Error::SignConsistency(format!("{type_label}: highest root is not unique")));
    }
    let highest_root = tops[0].clone();

    let mut root_index = HashMap::new();
    let n = positive.len();
    for (k, r) in positive.iter().enumerate() {
        root_index.insert(r.clone(), k);
        root_index.insert(r.iter().map(|x| -x).collect(), n + k);
    }

    let mut rs = RootSystem {
        type_label,
        rank,
        gram,
        positive_roots: positive,
        rho,
        highest_root,
        dual_coxeter: 0,
        cartan,
        root_index,
    };
    rs.dual_coxeter = dual_coxeter_number(&rs);
    Ok(rs)
}

fn height(r: &[i64]) -> i64 {
    r.iter().sum()
}

/// `h∨ = (ρ, θ∨) + 1` with `θ` the highest root.
pub fn dual_coxeter_number(rs: &RootSystem) -> usize {
    let theta: Vec<Q> = rs.highest_root.iter().map(|&x| qi(x)).collect();
    let theta_norm = rs.inner(&theta, &theta);
    let pairing = qi(2) * rs.inner(&rs.rho, &theta) / theta_norm;
    (pairing + Q::one()).to_integer().to_usize().expect("positive dual Coxeter number")
}

impl RootSystem {
    pub fn inner(&self, u: &[Q], v: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (i, ui) in u.iter().enumerate().take(self.rank) {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate().take(self.rank) {
                if vj.is_zero() || self.gram[(i, j)].is_zero() {
                    continue;
                }
                acc += ui * &self.gram[(i, j)] * vj;
            }
        }
        acc
    }

    pub fn inner_i64(&self, u: &[i64], v: &[i64]) -> Q {
        let u: Vec<Q> = u.iter().map(|&x| qi(x)).collect();
        let v: Vec<Q> = v.iter().map(|&x| qi(x)).collect();
        self.inner(&u, &v)
    }

    pub fn norm_i64(&self, v: &[i64]) -> Q {
        self.inner_i64(v, v)
    }

    /// `<v, α_i^∨>` for an integral vector `v`.
    pub fn coroot_pairing(&self, v: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|j| v[j] * self.cartan[j][i]).sum()
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// All roots: positive roots followed by their negatives in the same order.
    pub fn all_roots(&self) -> Vec<Vec<i64>> {
        let mut out = self.positive_roots.clone();
        out.extend(self.positive_roots.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        out
    }

    /// Index into [`RootSystem::all_roots`], if `v` is a root.
    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.root_index.get(v).copied()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.root_index.contains_key(v)
    }

    pub fn rho_norm(&self) -> Q {
        self.inner(&self.rho, &self.rho)
    }

    /// Matrix of the simple reflection `s_i` on simple-root coordinates.
    pub fn simple_reflection(&self, i: usize) -> Vec<i64> {
        let r = self.rank;
        let mut m = vec![0i64; r * r];
        for k in 0..r {
            m[k * r + k] = 1;
        }
        for j in 0..r {
            m[i * r + j] -= self.cartan[j][i];
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub rank: usize,
    /// Row-major integer matrix acting on simple-root coordinates.
    pub matrix: Vec<i64>,
    pub length: usize,
    pub sign: i8,
}

impl WeylElement {
    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        let r = self.rank;
        (0..r)
            .map(|i| {
                (0..r).fold(Q::zero(), |acc, j| {
                    let m = self.matrix[i * r + j];
                    if m == 0 || v[j].is_zero() {
                        acc
                    } else {
                        acc + &v[j] * qi(m)
                    }
                })
            })
            .collect()
    }

    pub fn apply_i64(&self, v: &[i64]) -> Vec<i64> {
        let r = self.rank;
        (0..r).map(|i| (0..r).map(|j| self.matrix[i * r + j] * v[j]).sum()).collect()
    }

    pub fn determinant(&self) -> i64 {
        let r = self.rank;
        let rows: Vec<Vec<i64>> = (0..r).map(|i| self.matrix[i * r..(i + 1) * r].to_vec()).collect();
        det_i64(&rows)
    }
}

fn left_multiply(rs: &RootSystem, i: usize, m: &[i64]) -> Vec<i64> {
    // Only row i changes: row_i <- row_i - sum_j <α_j, α_i^∨> row_j.
    let r = rs.rank;
    let mut out = m.to_vec();
    for j in 0..r {
        let c = rs.cartan[j][i];
        if c == 0 {
            continue;
        }
        for k in 0..r {
            out[i * r + k] -= c * m[j * r + k];
        }
    }
    out
}

/// Breadth-first enumeration of `W` by left multiplication with simple reflections.
/// BFS depth equals Coxeter length.
pub fn enumerate_weyl_group(rs: &RootSystem, cap: usize) -> Result<Vec<WeylElement>> {
    let r = rs.rank;
    let mut identity = vec![0i64; r * r];
    for k in 0..r {
        identity[k * r + k] = 1;
    }
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(identity.clone());
    let mut out = vec![WeylElement { rank: r, matrix: identity.clone(), length: 0, sign: 1 }];
    let mut queue = VecDeque::from([(identity, 0usize)]);
    while let Some((m, len)) = queue.pop_front() {
        for i in 0..r {
            let next = left_multiply(rs, i, &m);
            if seen.contains(&next) {
                continue;
            }
            if out.len() >= cap {
                return Err(Error::WeylCapExceeded { cap });
            }
            seen.insert(next.clone());
            let length = len + 1;
            let sign = if length % 2 == 0 { 1 } else { -1 };
            out.push(WeylElement { rank: r, matrix: next.clone(), length, sign });
            queue.push_back((next, length));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusCell {
    #[serde(serialize_with = "ser::q")]
    pub norm: Q,
    pub sign: i8,
    pub count: usize,
}

/// Multiset of `(|ρ - w(ρ)|², ε(w))` over the elements with norm at most `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub type_label: TypeLabel,
    #[serde(serialize_with = "ser::opt")]
    pub bound: Option<Q>,
    pub cells: Vec<CensusCell>,
}

impl Census {
    fn from_map(type_label: TypeLabel, bound: Option<Q>, map: BTreeMap<(Q, i8), usize>) -> Self {
        let mut cells: Vec<CensusCell> =
            map.into_iter().map(|((norm, sign), count)| CensusCell { norm, sign, count }).collect();
        cells.sort_by(|a, b| a.norm.cmp(&b.norm).then(b.sign.cmp(&a.sign)));
        Census { type_label, bound, cells }
    }

    pub fn count(&self, norm: &Q, sign: i8) -> usize {
        self.cells.iter().find(|c| &c.norm == norm && c.sign == sign).map_or(0, |c| c.count)
    }

    pub fn total(&self) -> usize {
        self.cells.iter().map(|c| c.count).sum()
    }
}

fn displacement(rs: &RootSystem, w: &WeylElement) -> Vec<Q> {
    let wr = w.apply(&rs.rho);
    rs.rho.iter().zip(&wr).map(|(a, b)| a - b).collect()
}

/// Census over the full enumerated Weyl group. `bound = None` keeps every element.
pub fn rho_displacement_census(rs: &RootSystem, weyl: &[WeylElement], bound: Option<&Q>) -> Census {
    let mut map: BTreeMap<(Q, i8), usize> = BTreeMap::new();
    for w in weyl {
        let d = displacement(rs, w);
        let norm = rs.inner(&d, &d);
        if bound.is_some_and(|b| &norm > b) {
            continue;
        }
        *map.entry((norm, w.sign)).or_default() += 1;
    }
    Census::from_map(rs.type_label, bound.cloned(), map)
}

/// An element of `W` recorded by its displacement `ρ - w(ρ)`, which is an
/// integral vector and determines `w` because `ρ` is regular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPoint {
    pub displacement: Vec<i64>,
    pub norm: Q,
    pub length: usize,
}

impl OrbitPoint {
    pub fn sign(&self) -> i8 {
        if self.length.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// All `w` with `|ρ - w(ρ)|² ≤ bound`, found without enumerating `W`.
///
/// Walks the orbit of `ρ` through length-increasing left multiplications and
/// prunes any element whose displacement norm exceeds `bound`. The norm is
/// strictly increasing along such steps, so every prefix of a reduced word of
/// a surviving element also survives and the search is complete.
pub fn bounded_rho_orbit(rs: &RootSystem, bound: &Q) -> Vec<OrbitPoint> {
    let r = rs.rank;
    let start = OrbitPoint { displacement: vec![0; r], norm: Q::zero(), length: 0 };
    let mut seen: HashSet<Vec<i64>> = HashSet::from([start.displacement.clone()]);
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for i in 0..r {
            // δ_{s_i w} = δ_w + <w(ρ), α_i^∨> α_i and <w(ρ), α_i^∨> = 1 - <δ_w, α_i^∨>.
            let step = 1 - rs.coroot_pairing(&p.displacement, i);
            if step <= 0 {
                continue;
            }
            let mut next = p.displacement.clone();
            next[i] += step;
            if seen.contains(&next) {
                continue;
            }
            let norm = rs.norm_i64(&next);
            if &norm > bound {
                continue;
            }
            seen.insert(next.clone());
            let pt = OrbitPoint { displacement: next, norm, length: p.length + 1 };
            out.push(pt.clone());
            queue.push_back(pt);
        }
    }
    out
}

/// Census built from [`bounded_rho_orbit`]; agrees with [`rho_displacement_census`].
pub fn bounded_census(rs: &RootSystem, bound: &Q) -> Census {
    let mut map: BTreeMap<(Q, i8), usize> = BTreeMap::new();
    for p in bounded_rho_orbit(rs, bound) {
        *map.entry((p.norm.clone(), p.sign())).or_default() += 1;
    }
    Census::from_map(rs.type_label, Some(bound.clone()), map)
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub type_label: TypeLabel,
    pub elements_checked: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

/// Checks `|ρ - w(ρ)| = |ρ - w⁻¹(ρ)|` and strict growth of the displacement
/// under length-increasing left multiplication, for every `w`.
pub fn check_rho_monotonicity(rs: &RootSystem, weyl: &[WeylElement]) -> MonotonicityReport {
    let r = rs.rank;
    let index: HashMap<&[i64], usize> = weyl.iter().enumerate().map(|(k, w)| (w.matrix.as_slice(), k)).collect();
    let norms: Vec<Q> = weyl
        .iter()
        .map(|w| {
            let d = displacement(rs, w);
            rs.inner(&d, &d)
        })
        .collect();
    let mut counterexample = None;
    'outer: for (k, w) in weyl.iter().enumerate() {
        let rows: Vec<Vec<Q>> = (0..r).map(|i| (0..r).map(|j| qi(w.matrix[i * r + j])).collect()).collect();
        let inv = Matrix::from_rows(rows).inverse().expect("Weyl elements are invertible");
        let inv_int: Vec<i64> =
            (0..r * r).map(|t| inv[(t / r, t % r)].to_integer().to_i64().expect("integral inverse")).collect();
        let Some(&ki) = index.get(inv_int.as_slice()) else {
            counterexample = Some(format!("inverse of element {k} not found in the enumeration"));
            break;
        };
        if norms[k] != norms[ki] {
            counterexample = Some(format!("element {k}: |ρ-wρ|² = {} but |ρ-w⁻¹ρ|² = {}", norms[k], norms[ki]));
            break;
        }
        for i in 0..r {
            let rw = left_multiply(rs, i, &w.matrix);
            let Some(&krw) = index.get(rw.as_slice()) else {
                counterexample = Some(format!("s_{i} w not found for element {k}"));
                break 'outer;
            };
            if weyl[krw].length > w.length && norms[krw] <= norms[k] {
                counterexample = Some(format!(
                    "element {k} (length {}): s_{i} increases length but |ρ-s_i wρ|² = {} ≤ {}",
                    w.length, norms[krw], norms[k]
                ));
                break 'outer;
            }
        }
    }
    MonotonicityReport {
        type_label: rs.type_label,
        elements_checked: weyl.len(),
        passed: counterexample.is_none(),
        counterexample,
    }
}

/// The `D4` root lattice in orthonormal coordinates `e_1..e_4` with simple roots
/// `e1-e2, e2-e3, e3-e4, e3+e4` (Bourbaki numbering: the third simple root
/// of the standard chain is the branch node's neighbour `e3-e4`).
#[derive(Clone, Debug)]
pub struct D4StandardBasis {
    /// Columns are the simple roots written in the `e`-basis.
    pub to_standard: Matrix,
    /// Inverse change of basis: `e`-coordinates to simple-root coordinates.
    pub to_simple: Matrix,
}

pub fn d4_standard_basis() -> D4StandardBasis {
    let cols: [[i64; 4]; 4] = [[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1], [0, 0, 1, 1]];
    let mut m = Matrix::zeros(4, 4);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..4 {
            m[(i, j)] = qi(col[i]);
        }
    }
    let inv = m.inverse().expect("simple roots form a basis");
    D4StandardBasis { to_standard: m, to_simple: inv }
}
