//! Finite groups of lattice automorphisms acting on `S(h ⊗ t⁻¹C[t⁻¹])`, with
//! graded invariant dimensions computed two ways: a Molien-type average and
//! the rank of the Reynolds projector on explicit monomials.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{rank_of, same_span, Matrix};
use crate::q_series::{reference_series, vomega_series};
use crate::rational::{q, qi, Q};
use crate::root_system::TypeLabel;

/// Largest degree handled by [`invariant_basis`] and [`molien_invariant_dimensions`].
pub const DEGREE_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Lattice {
    A2,
    D4,
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lattice::A2 => "A2",
            Lattice::D4 => "D4",
        })
    }
}

impl FromStr for Lattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A2" => Ok(Lattice::A2),
            "D4" => Ok(Lattice::D4),
            _ => Err(Error::UnsupportedLattice(s.to_string())),
        }
    }
}

impl Lattice {
    pub fn rank(self) -> usize {
        match self {
            Lattice::A2 => 2,
            Lattice::D4 => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Subgroup {
    /// All lattice automorphisms.
    Full,
    /// Weyl group.
    Weyl,
    /// Even sign changes (`D4`).
    EvenSigns,
    /// Coordinate permutations (`D4`).
    Permutations,
    /// Diagram automorphisms `⟨ν, σ⟩` (`D4`).
    Diagram,
    /// `⟨-1⟩` (`A2`).
    MinusOne,
    /// `⟨-1, τ⟩` (`A2`).
    MinusOneTau,
    Identity,
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subgroup::Full => "full",
            Subgroup::Weyl => "W",
            Subgroup::EvenSigns => "E",
            Subgroup::Permutations => "S4",
            Subgroup::Diagram => "H",
            Subgroup::MinusOne => "minus-one",
            Subgroup::MinusOneTau => "minus-one-tau",
            Subgroup::Identity => "identity",
        })
    }
}

impl FromStr for Subgroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "full" | "aut" | "Aut" => Subgroup::Full,
            "W" | "w" | "weyl" => Subgroup::Weyl,
            "E" | "e" | "even-signs" => Subgroup::EvenSigns,
            "S4" | "s4" | "permutations" => Subgroup::Permutations,
            "H" | "h" | "diagram" => Subgroup::Diagram,
            "minus-one" | "-1" => Subgroup::MinusOne,
            "minus-one-tau" | "-1,tau" => Subgroup::MinusOneTau,
            "identity" | "1" => Subgroup::Identity,
            _ => return Err(Error::UnsupportedLattice(format!("unknown subgroup `{s}`"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    pub lattice: Lattice,
    pub subgroup: Subgroup,
    pub rank: usize,
    pub labels: Vec<String>,
    pub generators: Vec<Matrix>,
    /// Closure of the generators; the identity comes first.
    pub elements: Vec<Matrix>,
}

/// Elements with more than this many members are rejected during closure.
const CLOSURE_CAP: usize = 10_000;

fn key(m: &Matrix) -> Vec<Q> {
    m.to_rows().into_iter().flatten().collect()
}

impl FiniteMatrixGroup {
    pub fn generate(lattice: Lattice, subgroup: Subgroup, labelled: Vec<(String, Matrix)>) -> Result<Self> {
        let rank = lattice.rank();
        let (labels, generators): (Vec<_>, Vec<_>) = labelled.into_iter().unzip();
        let id = Matrix::identity(rank);
        let mut seen: HashSet<Vec<Q>> = HashSet::new();
        seen.insert(key(&id));
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in &generators {
                let h = s.mul(&g);
                if seen.insert(key(&h)) {
                    if elements.len() >= CLOSURE_CAP {
                        return Err(Error::CapExceeded { what: "group closure".into(), cap: CLOSURE_CAP });
                    }
                    elements.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(FiniteMatrixGroup { lattice, subgroup, rank, labels, generators, elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        let k = key(m);
        self.elements.iter().any(|g| key(g) == k)
    }

    /// Closed under products and inverses.
    pub fn is_closed(&self) -> bool {
        let keys: HashSet<Vec<Q>> = self.elements.iter().map(key).collect();
        self.elements.iter().all(|a| {
            a.inverse().is_some_and(|inv| keys.contains(&key(&inv)))
                && self.elements.iter().all(|b| keys.contains(&key(&a.mul(b))))
        })
    }
}

/// Matrix whose `j`-th column is the image of the `j`-th basis vector.
fn from_images(images: &[Vec<Q>]) -> Matrix {
    Matrix::from_rows(images.to_vec()).transpose()
}

fn int_images(images: &[Vec<i64>]) -> Matrix {
    from_images(&images.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect::<Vec<_>>())
}

fn a2_generator(name: &str) -> Matrix {
    match name {
        "-1" => int_images(&[vec![-1, 0], vec![0, -1]]),
        "tau" => int_images(&[vec![0, 1], vec![1, 0]]),
        "mu" => int_images(&[vec![1, 0], vec![-1, -1]]),
        "s1" => int_images(&[vec![-1, 0], vec![1, 1]]),
        "s2" => int_images(&[vec![1, 1], vec![0, -1]]),
        _ => unreachable!("unknown A2 generator {name}"),
    }
}

fn signs(flip: &[usize]) -> Matrix {
    let mut m = Matrix::identity(4);
    for &i in flip {
        m[(i, i)] = -Q::one();
    }
    m
}

fn transposition(i: usize, j: usize) -> Matrix {
    let mut m = Matrix::identity(4);
    m[(i, i)] = Q::zero();
    m[(j, j)] = Q::zero();
    m[(i, j)] = Q::one();
    m[(j, i)] = Q::one();
    m
}

/// `σ` on the orthonormal basis `e1..e4`.
fn d4_sigma() -> Matrix {
    let h = |v: [i64; 4]| v.iter().map(|&x| q(x, 2)).collect::<Vec<_>>();
    from_images(&[h([1, 1, 1, -1]), h([1, 1, -1, 1]), h([1, -1, 1, 1]), h([-1, 1, 1, 1])])
}

fn d4_generators(subgroup: Subgroup) -> Vec<(String, Matrix)> {
    let even = || {
        vec![
            ("flip(e1,e2)".to_string(), signs(&[0, 1])),
            ("flip(e2,e3)".to_string(), signs(&[1, 2])),
            ("flip(e3,e4)".to_string(), signs(&[2, 3])),
        ]
    };
    let perms = || {
        vec![
            ("(12)".to_string(), transposition(0, 1)),
            ("(23)".to_string(), transposition(1, 2)),
            ("(34)".to_string(), transposition(2, 3)),
        ]
    };
    let diagram = || vec![("nu".to_string(), signs(&[3])), ("sigma".to_string(), d4_sigma())];
    match subgroup {
        Subgroup::EvenSigns => even(),
        Subgroup::Permutations => perms(),
        Subgroup::Diagram => diagram(),
        Subgroup::Weyl => [even(), perms()].concat(),
        Subgroup::Full => [even(), perms(), diagram()].concat(),
        _ => Vec::new(),
    }
}

/// Explicit automorphism groups of the `A2` root lattice (simple-root coordinates)
/// and the `D4` root lattice (orthonormal coordinates).
pub fn lattice_automorphism_group(lattice: Lattice, subgroup: Subgroup) -> Result<FiniteMatrixGroup> {
    let gens: Vec<(String, Matrix)> = match (lattice, subgroup) {
        (_, Subgroup::Identity) => Vec::new(),
        (Lattice::A2, Subgroup::Full) => ["-1", "tau", "mu"].iter().map(|n| (n.to_string(), a2_generator(n))).collect(),
        (Lattice::A2, Subgroup::Weyl) => ["s1", "s2"].iter().map(|n| (n.to_string(), a2_generator(n))).collect(),
        (Lattice::A2, Subgroup::MinusOne) => vec![("-1".into(), a2_generator("-1"))],
        (Lattice::A2, Subgroup::MinusOneTau) => {
            ["-1", "tau"].iter().map(|n| (n.to_string(), a2_generator(n))).collect()
        }
        (
            Lattice::D4,
            s @ (Subgroup::Full | Subgroup::Weyl | Subgroup::EvenSigns | Subgroup::Permutations | Subgroup::Diagram),
        ) => d4_generators(s),
        (l, s) => return Err(Error::UnsupportedLattice(format!("{l} with subgroup {s}"))),
    };
    FiniteMatrixGroup::generate(lattice, subgroup, gens)
}

/// `(1/|G|) Σ_g [q^n] ∏_{k≥1} det(1 - q^k g)^{-1}` for `n = 0..=max_degree`.
pub fn molien_invariant_dimensions(group: &FiniteMatrixGroup, max_degree: usize) -> Result<Vec<u64>> {
    if max_degree > DEGREE_CAP {
        return Err(Error::CapExceeded { what: format!("degree {max_degree}"), cap: DEGREE_CAP });
    }
    let n = max_degree;
    let mut total = vec![Q::zero(); n + 1];
    for g in &group.elements {
        // Power sums p_k = tr(g^k), then complete homogeneous h_m by Newton's identities.
        let mut p = vec![Q::zero(); n + 1];
        let mut gk = Matrix::identity(group.rank);
        for pk in p.iter_mut().skip(1) {
            gk = gk.mul(g);
            *pk = gk.trace();
        }
        let mut h = vec![Q::one(); n + 1];
        for m in 1..=n {
            let s: Q = (1..=m).map(|i| &p[i] * &h[m - i]).sum();
            h[m] = s / qi(m as i64);
        }
        // ∏_k Σ_m h_m q^{km}.
        let mut series = vec![Q::zero(); n + 1];
        series[0] = Q::one();
        for k in 1..=n {
            let mut next = vec![Q::zero(); n + 1];
            for (a, ca) in series.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for m in 0..=(n - a) / k {
                    next[a + k * m] += ca * &h[m];
                }
            }
            series = next;
        }
        for (t, s) in total.iter_mut().zip(series) {
            *t += s;
        }
    }
    let order = qi(group.order() as i64);
    total
        .into_iter()
        .enumerate()
        .map(|(degree, t)| {
            let avg = t / &order;
            if avg.is_integer() {
                Ok(avg.to_integer().to_u64().expect("nonnegative dimension"))
            } else {
                Err(Error::NonIntegralAverage { value: avg, degree })
            }
        })
        .collect()
}

/// `h_index(-depth)`.
pub type Slot = (usize, usize);

/// Sorted multiset of slots.
pub type Monomial = Vec<Slot>;

/// Coordinates on the monomial basis of [`GradedMonomialSpace`].
pub type Polynomial = HashMap<Monomial, Q>;

#[derive(Clone, Debug)]
pub struct GradedMonomialSpace {
    pub rank: usize,
    pub degree: usize,
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedMonomialSpace {
    pub fn new(rank: usize, degree: usize) -> Self {
        let mut basis = Vec::new();
        let mut current = Vec::new();
        fill(rank, degree, (1, 0), &mut current, &mut basis);
        basis.sort();
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        GradedMonomialSpace { rank, degree, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coordinates(&self, p: &Polynomial) -> Result<Vec<Q>> {
        let mut v = vec![Q::zero(); self.dim()];
        for (m, c) in p {
            let i = *self.index.get(m).ok_or_else(|| {
                Error::InvalidArgument(format!("monomial {m:?} is not in the degree-{} space", self.degree))
            })?;
            v[i] += c;
        }
        Ok(v)
    }

    pub fn polynomial(&self, coords: &[Q]) -> Polynomial {
        coords.iter().zip(&self.basis).filter(|(c, _)| !c.is_zero()).map(|(c, m)| (m.clone(), c.clone())).collect()
    }
}

/// Monomials of weight `left` using slots `>= min` in lexicographic order.
fn fill(rank: usize, left: usize, min: Slot, current: &mut Monomial, out: &mut Vec<Monomial>) {
    if left == 0 {
        out.push(current.clone());
        return;
    }
    for depth in min.0..=left {
        let start = if depth == min.0 { min.1 } else { 0 };
        for index in start..rank {
            current.push((depth, index));
            fill(rank, left - depth, (depth, index), current, out);
            current.pop();
        }
    }
}

/// Image of a polynomial under `g`, acting on every slot `h(-n) ↦ (gh)(-n)`.
pub fn act(g: &Matrix, p: &Polynomial) -> Polynomial {
    let mut out: Polynomial = HashMap::new();
    for (m, c) in p {
        let mut partial: Vec<(Monomial, Q)> = vec![(Vec::new(), c.clone())];
        for &(depth, index) in m {
            let mut next = Vec::with_capacity(partial.len() * g.rows());
            for (pm, pc) in &partial {
                for j in 0..g.rows() {
                    let entry = &g[(j, index)];
                    if entry.is_zero() {
                        continue;
                    }
                    let mut nm = pm.clone();
                    nm.push((depth, j));
                    next.push((nm, pc * entry));
                }
            }
            partial = next;
        }
        for (mut pm, pc) in partial {
            pm.sort();
            *out.entry(pm).or_insert_with(Q::zero) += pc;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Integer form of a group element: `g = matrix / denominator`.
struct ScaledElement {
    denominator: i64,
    columns: Vec<Vec<(usize, i64)>>,
}

fn scaled(g: &Matrix) -> ScaledElement {
    let mut den = num_bigint::BigInt::one();
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            den = num_integer::Integer::lcm(&den, g[(i, j)].denom());
        }
    }
    let denominator = den.to_i64().expect("small denominator");
    let columns = (0..g.cols())
        .map(|j| {
            (0..g.rows())
                .filter_map(|i| {
                    let v = &g[(i, j)] * qi(denominator);
                    (!v.is_zero()).then(|| (i, v.to_integer().to_i64().expect("small entry")))
                })
                .collect()
        })
        .collect();
    ScaledElement { denominator, columns }
}

/// `|G| · D^t · R(m)` for every basis monomial `m` with `t` factors, where `R` is
/// the Reynolds projector and `D` the common denominator of the group.
fn reynolds_images(group: &FiniteMatrixGroup, space: &GradedMonomialSpace) -> Vec<Vec<Q>> {
    let elements: Vec<ScaledElement> = group.elements.iter().map(scaled).collect();
    let common = elements.iter().map(|e| e.denominator).fold(1, num_integer::lcm);
    let mut out = Vec::with_capacity(space.dim());
    for m in &space.basis {
        let mut acc: HashMap<Monomial, i64> = HashMap::new();
        for e in &elements {
            let boost = (common / e.denominator).pow(m.len() as u32);
            let mut partial: Vec<(Monomial, i64)> = vec![(Vec::with_capacity(m.len()), boost)];
            for &(depth, index) in m {
                let mut next = Vec::with_capacity(partial.len() * 2);
                for (pm, pc) in &partial {
                    for &(j, entry) in &e.columns[index] {
                        let mut nm = pm.clone();
                        nm.push((depth, j));
                        next.push((nm, pc * entry));
                    }
                }
                partial = next;
            }
            for (mut pm, pc) in partial {
                pm.sort_unstable();
                *acc.entry(pm).or_insert(0) += pc;
            }
        }
        let mut v = vec![Q::zero(); space.dim()];
        for (pm, c) in acc {
            if c != 0 {
                v[space.index[&pm]] = qi(c);
            }
        }
        out.push(v);
    }
    out
}

#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub space: GradedMonomialSpace,
    /// Row-reduced basis of the invariant subspace, in space coordinates.
    pub vectors: Vec<Vec<Q>>,
}

impl InvariantBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.vectors.iter().map(|v| self.space.polynomial(v)).collect()
    }
}

/// Reynolds images of all degree-`n` monomials reduced to a basis.
pub fn invariant_basis(group: &FiniteMatrixGroup, degree: usize) -> Result<InvariantBasis> {
    if degree > DEGREE_CAP {
        return Err(Error::CapExceeded { what: format!("degree {degree}"), cap: DEGREE_CAP });
    }
    let space = GradedMonomialSpace::new(group.rank, degree);
    let images = reynolds_images(group, &space);
    let vectors = crate::linalg::row_basis(&images);
    Ok(InvariantBasis { space, vectors })
}

fn poly(terms: Vec<(Q, Monomial)>) -> Polynomial {
    let mut p: Polynomial = HashMap::new();
    for (c, mut m) in terms {
        m.sort();
        *p.entry(m).or_insert_with(Q::zero) += c;
    }
    p.retain(|_, c| !c.is_zero());
    p
}

fn coords_of(space: &GradedMonomialSpace, ps: &[Polynomial]) -> Result<Vec<Vec<Q>>> {
    ps.iter().map(|p| space.coordinates(p)).collect()
}

/// Sums printed for the degree-3 invariants of `⟨-1, τ⟩` on `A2`.
pub fn a2_minus_one_tau_degree3() -> Vec<Polynomial> {
    vec![
        poly(vec![(qi(1), vec![(2, 0), (1, 0)]), (qi(1), vec![(2, 1), (1, 1)])]),
        poly(vec![(qi(1), vec![(2, 0), (1, 1)]), (qi(1), vec![(2, 1), (1, 0)])]),
    ]
}

/// Sum printed for the degree-3 invariants of `Aut(A2)`.
pub fn a2_full_degree3() -> Vec<Polynomial> {
    vec![poly(vec![
        (qi(1), vec![(2, 0), (1, 0)]),
        (qi(1), vec![(2, 1), (1, 1)]),
        (q(1, 2), vec![(2, 0), (1, 1)]),
        (q(1, 2), vec![(2, 1), (1, 0)]),
    ])]
}

fn sum_e4(pairs_coeff: Q) -> Polynomial {
    let mut terms: Vec<(Q, Monomial)> = (0..4).map(|i| (qi(1), vec![(1, i); 4])).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            terms.push((pairs_coeff.clone(), vec![(1, i), (1, i), (1, j), (1, j)]));
        }
    }
    poly(terms)
}

fn diag_sum(depths: [usize; 2]) -> Polynomial {
    poly((0..4).map(|i| (qi(1), vec![(depths[0], i), (depths[1], i)])).collect())
}

fn e1e2e3e4() -> Polynomial {
    poly(vec![(qi(1), vec![(1, 0), (1, 1), (1, 2), (1, 3)])])
}

/// Sums printed for the degree-4 Weyl invariants of `D4`.
pub fn d4_weyl_degree4() -> Vec<Polynomial> {
    let quartic = poly((0..4).map(|i| (qi(1), vec![(1, i); 4])).collect());
    let pairs = sum_e4(qi(1)).into_iter().filter(|(m, _)| !quartic.contains_key(m)).collect();
    vec![quartic, pairs, diag_sum([3, 1]), diag_sum([2, 2]), e1e2e3e4()]
}

/// Sums printed for the degree-4 invariants of `Aut(D4)`.
pub fn d4_full_degree4() -> Vec<Polynomial> {
    vec![diag_sum([3, 1]), diag_sum([2, 2]), sum_e4(qi(2))]
}

/// The two-dimensional subspace `X` of degree-4 Weyl invariants of `D4`.
pub fn d4_x_subspace() -> Vec<Polynomial> {
    vec![sum_e4(qi(-2)), e1e2e3e4()]
}

/// `h(-n) ↦ n·h(-n-1)` extended as a derivation.
pub fn translate(p: &Polynomial) -> Polynomial {
    let mut terms = Vec::new();
    for (m, c) in p {
        for k in 0..m.len() {
            let (depth, index) = m[k];
            let mut nm = m.clone();
            nm[k] = (depth + 1, index);
            terms.push((c * qi(depth as i64), nm));
        }
    }
    poly(terms)
}

/// Whether the spans of `computed` and `printed` agree in the given space.
pub fn spans_agree(space: &GradedMonomialSpace, computed: &[Vec<Q>], printed: &[Polynomial]) -> Result<bool> {
    Ok(same_span(computed, &coords_of(space, printed)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct XSubspaceReport {
    pub dim_x: usize,
    pub h_stable: bool,
    pub h_fixed_dim: usize,
    pub inside_weyl_invariants: bool,
    pub meets_full_invariants_trivially: bool,
    pub weyl_degree4: u64,
    pub full_degree4: u64,
    /// `dim(S^W)^4 = dim(S^Aut)^4 + dim X`.
    pub bookkeeping_degree4: bool,
    /// Degree-4 coefficient of the `D4` fixture.
    pub fixture_degree4: i64,
    /// `dim(S^W)^4 = fixture coefficient + 1`.
    pub fixture_plus_one: bool,
    pub translated_dim: usize,
    pub vomega_degree5: i64,
    pub fixture_degree5: i64,
    /// `dim L(-1)X + dim V_ω^5` equals the degree-5 fixture coefficient.
    pub bookkeeping_degree5: bool,
    pub passed: bool,
}

pub fn d4_x_subspace_check() -> Result<XSubspaceReport> {
    let weyl = lattice_automorphism_group(Lattice::D4, Subgroup::Weyl)?;
    let full = lattice_automorphism_group(Lattice::D4, Subgroup::Full)?;
    let h = lattice_automorphism_group(Lattice::D4, Subgroup::Diagram)?;
    let space = GradedMonomialSpace::new(4, 4);
    let x = d4_x_subspace();
    let x_coords = coords_of(&space, &x)?;
    let dim_x = rank_of(&x_coords);

    let h_stable = h.generators.iter().try_fold(true, |ok, g| -> Result<bool> {
        let images = coords_of(&space, &x.iter().map(|p| act(g, p)).collect::<Vec<_>>())?;
        Ok(ok && rank_of(&[x_coords.clone(), images].concat()) == dim_x)
    })?;
    let mut averaged = Vec::new();
    for p in &x {
        let mut sum: Polynomial = HashMap::new();
        for g in &h.elements {
            for (m, c) in act(g, p) {
                *sum.entry(m).or_insert_with(Q::zero) += c;
            }
        }
        averaged.push(space.coordinates(&sum)?);
    }
    let h_fixed_dim = rank_of(&averaged);

    let inside_weyl_invariants = weyl
        .generators
        .iter()
        .all(|g| x.iter().all(|p| space.coordinates(&act(g, p)).ok() == space.coordinates(p).ok()));

    let full_basis = invariant_basis(&full, 4)?;
    let meets_full_invariants_trivially =
        rank_of(&[x_coords.clone(), full_basis.vectors.clone()].concat()) == dim_x + full_basis.dim();

    let weyl_dims = molien_invariant_dimensions(&weyl, 5)?;
    let full_dims = molien_invariant_dimensions(&full, 5)?;
    let bookkeeping_degree4 = weyl_dims[4] == full_dims[4] + dim_x as u64;

    let fixture = reference_series(TypeLabel::D(4))?;
    let coefficient = |n: i64| fixture.coefficient(&qi(n)).to_integer().to_i64().expect("small coefficient");
    let fixture_degree4 = coefficient(4);
    let fixture_degree5 = coefficient(5);
    let fixture_plus_one = weyl_dims[4] as i64 == fixture_degree4 + 1;

    let space5 = GradedMonomialSpace::new(4, 5);
    let translated = coords_of(&space5, &x.iter().map(translate).collect::<Vec<_>>())?;
    let translated_dim = rank_of(&translated);
    let vomega_degree5 = vomega_series(6).coefficient(&qi(5)).to_integer().to_i64().expect("small coefficient");
    let bookkeeping_degree5 = translated_dim as i64 + vomega_degree5 == fixture_degree5;

    let passed = dim_x == 2
        && h_stable
        && h_fixed_dim == 0
        && inside_weyl_invariants
        && meets_full_invariants_trivially
        && bookkeeping_degree4
        && fixture_plus_one
        && bookkeeping_degree5;
    Ok(XSubspaceReport {
        dim_x,
        h_stable,
        h_fixed_dim,
        inside_weyl_invariants,
        meets_full_invariants_trivially,
        weyl_degree4: weyl_dims[4],
        full_degree4: full_dims[4],
        bookkeeping_degree4,
        fixture_degree4,
        fixture_plus_one,
        translated_dim,
        vomega_degree5,
        fixture_degree5,
        bookkeeping_degree5,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantTable {
    pub lattice: Lattice,
    pub subgroup: Subgroup,
    pub order: usize,
    pub molien: Vec<u64>,
    pub reynolds: Vec<usize>,
    pub agree: bool,
}

/// Molien and Reynolds dimensions for degrees `0..=max_degree`.
pub fn invariant_table(lattice: Lattice, subgroup: Subgroup, max_degree: usize) -> Result<InvariantTable> {
    let group = lattice_automorphism_group(lattice, subgroup)?;
    let molien = molien_invariant_dimensions(&group, max_degree)?;
    let reynolds = (0..=max_degree).map(|n| invariant_basis(&group, n).map(|b| b.dim())).collect::<Result<Vec<_>>>()?;
    let agree = molien.iter().zip(&reynolds).all(|(&m, &r)| m == r as u64);
    Ok(InvariantTable { lattice, subgroup, order: group.order(), molien, reynolds, agree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(l: Lattice, s: Subgroup) -> FiniteMatrixGroup {
        lattice_automorphism_group(l, s).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(group(Lattice::A2, Subgroup::Full).order(), 12);
        assert_eq!(group(Lattice::A2, Subgroup::Identity).order(), 1);
        assert_eq!(group(Lattice::A2, Subgroup::MinusOneTau).order(), 4);
        assert_eq!(group(Lattice::D4, Subgroup::EvenSigns).order(), 8);
        assert_eq!(group(Lattice::D4, Subgroup::Weyl).order(), 192);
        assert_eq!(group(Lattice::D4, Subgroup::Diagram).order(), 6);
        assert_eq!(group(Lattice::D4, Subgroup::Full).order(), 1152);
    }

    #[test]
    fn groups_are_closed_and_preserve_the_form() {
        let a2 = group(Lattice::A2, Subgroup::Full);
        assert!(a2.is_closed());
        let gram = Matrix::from_i64_rows(&[vec![2, -1], vec![-1, 2]]);
        for g in &a2.elements {
            assert_eq!(g.transpose().mul(&gram).mul(g), gram);
        }
        let h = group(Lattice::D4, Subgroup::Diagram);
        assert!(h.is_closed());
        for g in &group(Lattice::D4, Subgroup::Full).elements {
            assert_eq!(g.transpose().mul(g), Matrix::identity(4));
        }
    }

    #[test]
    fn unsupported_combination() {
        assert!(lattice_automorphism_group(Lattice::A2, Subgroup::Diagram).is_err());
        assert!(lattice_automorphism_group(Lattice::D4, Subgroup::MinusOne).is_err());
    }

    #[test]
    fn trivial_group_counts_monomials() {
        // ∏(1-q^k)^{-2}: 1, 2, 5, 10, 20, 36.
        let dims = molien_invariant_dimensions(&group(Lattice::A2, Subgroup::Identity), 5).unwrap();
        assert_eq!(dims, vec![1, 2, 5, 10, 20, 36]);
        for (n, &d) in dims.iter().enumerate() {
            assert_eq!(GradedMonomialSpace::new(2, n).dim() as u64, d);
        }
    }

    #[test]
    fn a2_dimensions() {
        let dims = molien_invariant_dimensions(&group(Lattice::A2, Subgroup::Full), 3).unwrap();
        assert_eq!(dims, vec![1, 0, 1, 1]);
        let dims = molien_invariant_dimensions(&group(Lattice::A2, Subgroup::MinusOneTau), 3).unwrap();
        assert_eq!(dims[3], 2);
    }

    #[test]
    fn d4_dimensions() {
        assert_eq!(molien_invariant_dimensions(&group(Lattice::D4, Subgroup::Weyl), 4).unwrap()[4], 5);
        assert_eq!(molien_invariant_dimensions(&group(Lattice::D4, Subgroup::Full), 4).unwrap()[4], 3);
        // 10 + 4 + 4 + 1 printed E-invariant monomials.
        assert_eq!(molien_invariant_dimensions(&group(Lattice::D4, Subgroup::EvenSigns), 4).unwrap()[4], 19);
    }

    #[test]
    fn printed_spans() {
        let g = group(Lattice::A2, Subgroup::MinusOneTau);
        let b = invariant_basis(&g, 3).unwrap();
        assert_eq!(b.dim(), 2);
        assert!(spans_agree(&b.space, &b.vectors, &a2_minus_one_tau_degree3()).unwrap());

        let b = invariant_basis(&group(Lattice::A2, Subgroup::Full), 3).unwrap();
        assert!(spans_agree(&b.space, &b.vectors, &a2_full_degree3()).unwrap());

        let b = invariant_basis(&group(Lattice::D4, Subgroup::Weyl), 4).unwrap();
        assert!(spans_agree(&b.space, &b.vectors, &d4_weyl_degree4()).unwrap());

        let b = invariant_basis(&group(Lattice::D4, Subgroup::Full), 4).unwrap();
        assert_eq!(b.dim(), 3);
        assert!(spans_agree(&b.space, &b.vectors, &d4_full_degree4()).unwrap());
    }

    #[test]
    fn no_degree_one_invariants_with_minus_one() {
        assert_eq!(invariant_basis(&group(Lattice::A2, Subgroup::MinusOne), 1).unwrap().dim(), 0);
        assert_eq!(invariant_basis(&group(Lattice::D4, Subgroup::Weyl), 1).unwrap().dim(), 0);
    }

    #[test]
    fn reynolds_matches_molien_a2() {
        for s in [Subgroup::Full, Subgroup::Weyl, Subgroup::MinusOne, Subgroup::MinusOneTau] {
            let t = invariant_table(Lattice::A2, s, 5).unwrap();
            assert!(t.agree, "{s}: {:?} vs {:?}", t.molien, t.reynolds);
        }
    }

    #[test]
    fn reynolds_matches_molien_d4() {
        for s in [Subgroup::Full, Subgroup::Weyl, Subgroup::EvenSigns, Subgroup::Diagram] {
            let t = invariant_table(Lattice::D4, s, 5).unwrap();
            assert!(t.agree, "{s}: {:?} vs {:?}", t.molien, t.reynolds);
        }
    }

    #[test]
    fn x_subspace() {
        let r = d4_x_subspace_check().unwrap();
        assert_eq!(r.dim_x, 2);
        assert_eq!(r.h_fixed_dim, 0);
        assert!(r.passed, "{r:?}");
    }
}
