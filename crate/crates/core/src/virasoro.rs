//! Virasoro vacuum module `V_ω` and lowest-weight modules in the PBW basis
//! `L(-n_1)…L(-n_k)v` with `n_1 ≥ … ≥ n_k`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::classification::degenerate_central_charges_up_to;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{fmt_q, q, qi, ser, Q};

/// Largest degree accepted by [`vacuum_basis`] and [`gram_matrix`].
pub const DEGREE_CAP: usize = 8;

/// Parts `n_1 ≥ … ≥ n_k` of `L(-n_1)…L(-n_k)v`.
pub type Partition = Vec<i64>;

type Terms = BTreeMap<Partition, Q>;

fn add_into(acc: &mut Terms, terms: &Terms, k: &Q) {
    if k.is_zero() {
        return;
    }
    for (p, c) in terms {
        let e = acc.entry(p.clone()).or_insert_with(Q::zero);
        *e += c * k;
        if e.is_zero() {
            acc.remove(p);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirasoroState {
    pub c: Q,
    terms: Terms,
}

impl VirasoroState {
    pub fn zero(c: &Q) -> Self {
        VirasoroState { c: c.clone(), terms: Terms::new() }
    }

    pub fn vacuum(c: &Q) -> Self {
        Self::monomial(c, &[], Q::one())
    }

    /// `coeff · L(-parts[0])…L(-parts[k-1])𝟙`; parts are sorted into PBW order.
    pub fn monomial(c: &Q, parts: &[i64], coeff: Q) -> Self {
        let mut p = parts.to_vec();
        p.sort_unstable_by(|a, b| b.cmp(a));
        let mut s = Self::zero(c);
        if !coeff.is_zero() {
            s.terms.insert(p, coeff);
        }
        s
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, parts: &[i64]) -> Q {
        self.terms.get(parts).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a homogeneous state; `None` for zero or mixed states.
    pub fn degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|p| p.iter().sum::<i64>() as usize);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        add_into(&mut terms, &other.terms, &Q::one());
        VirasoroState { c: self.c.clone(), terms }
    }

    pub fn scale(&self, k: &Q) -> Self {
        let mut terms = Terms::new();
        add_into(&mut terms, &self.terms, k);
        VirasoroState { c: self.c.clone(), terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }
}

impl std::fmt::Display for VirasoroState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().rev().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if sign == "-" {
                f.write_str("-")?;
            }
            if !mag.is_one() {
                write!(f, "({})", fmt_q(&mag))?;
            }
            let mut j = 0;
            while j < p.len() {
                let run = p[j..].iter().take_while(|&&x| x == p[j]).count();
                write!(f, "L(-{})", p[j])?;
                if run > 1 {
                    write!(f, "^{run}")?;
                }
                j += run;
            }
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl Serialize for VirasoroState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(Partition, String)> = self.terms.iter().map(|(p, c)| (p.clone(), fmt_q(c))).collect();
        let mut st = s.serialize_struct("VirasoroState", 3)?;
        st.serialize_field("c", &fmt_q(&self.c))?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

/// A lowest-weight module generated by `v` with `L(0)v = h v` and `L(n)v = 0` for
/// `n ≥ 1`; in the vacuum module also `L(-1)v = 0`.
pub struct VirasoroModule {
    pub c: Q,
    pub h: Q,
    /// Smallest allowed part: 2 in the vacuum module, 1 otherwise.
    min_part: i64,
    memo: RefCell<HashMap<(i64, Partition), Terms>>,
}

impl VirasoroModule {
    pub fn vacuum(c: &Q) -> Self {
        VirasoroModule { c: c.clone(), h: Q::zero(), min_part: 2, memo: RefCell::new(HashMap::new()) }
    }

    pub fn verma(c: &Q, h: &Q) -> Self {
        VirasoroModule { c: c.clone(), h: h.clone(), min_part: 1, memo: RefCell::new(HashMap::new()) }
    }

    fn apply_monomial(&self, k: i64, parts: &[i64]) -> Terms {
        let key = (k, parts.to_vec());
        if let Some(t) = self.memo.borrow().get(&key) {
            return t.clone();
        }
        let out = self.apply_monomial_uncached(k, parts);
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn apply_monomial_uncached(&self, k: i64, parts: &[i64]) -> Terms {
        let mut out = Terms::new();
        let Some((&n1, rest)) = parts.split_first() else {
            if k == 0 && !self.h.is_zero() {
                out.insert(Vec::new(), self.h.clone());
            } else if k < 0 && -k >= self.min_part {
                out.insert(vec![-k], Q::one());
            }
            return out;
        };
        if k < 0 && -k >= n1 {
            let mut p = Vec::with_capacity(parts.len() + 1);
            p.push(-k);
            p.extend_from_slice(parts);
            out.insert(p, Q::one());
            return out;
        }
        if k == 0 {
            let weight = &self.h + qi(parts.iter().sum());
            if !weight.is_zero() {
                out.insert(parts.to_vec(), weight);
            }
            return out;
        }
        // L(k)L(-n1) = L(-n1)L(k) + (k+n1)L(k-n1) + δ_{k,n1} c(k³-k)/12.
        let inner = self.apply_monomial(k, rest);
        add_into(&mut out, &self.apply_terms(-n1, &inner), &Q::one());
        if k + n1 != 0 {
            add_into(&mut out, &self.apply_monomial(k - n1, rest), &qi(k + n1));
        }
        if k == n1 {
            let central = &self.c * qi(k * k * k - k) / qi(12);
            let single: Terms = [(rest.to_vec(), Q::one())].into();
            add_into(&mut out, &single, &central);
        }
        out
    }

    fn apply_terms(&self, k: i64, terms: &Terms) -> Terms {
        let mut out = Terms::new();
        for (p, c) in terms {
            add_into(&mut out, &self.apply_monomial(k, p), c);
        }
        out
    }

    /// `L(m)` applied to a state, normal ordered.
    pub fn apply_l(&self, m: i64, state: &VirasoroState) -> VirasoroState {
        VirasoroState { c: self.c.clone(), terms: self.apply_terms(m, &state.terms) }
    }

    /// Contravariant pairing with `L(n)† = L(-n)` and `⟨v, v⟩ = 1`.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> Q {
        let mut terms: Terms = [(b.to_vec(), Q::one())].into();
        for &n in a {
            terms = self.apply_terms(n, &terms);
        }
        terms.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn basis(&self, degree: usize) -> Vec<Partition> {
        partitions(degree as i64, self.min_part)
    }

    pub fn gram(&self, degree: usize) -> Matrix {
        let basis = self.basis(degree);
        Matrix::from_rows(basis.iter().map(|a| basis.iter().map(|b| self.pairing(a, b)).collect()).collect())
    }
}

/// Partitions of `n` into parts `≥ min_part`, parts in decreasing order, listed
/// lexicographically from the largest first part.
pub fn partitions(n: i64, min_part: i64) -> Vec<Partition> {
    fn go(n: i64, max: i64, min: i64, cur: &mut Partition, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (min..=max.min(n)).rev() {
            cur.push(p);
            go(n - p, p, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, min_part, &mut Vec::new(), &mut out);
    out
}

fn check_cap(degree: usize) -> Result<()> {
    if degree > DEGREE_CAP {
        return Err(Error::CapExceeded { what: format!("Virasoro degree {degree}"), cap: DEGREE_CAP });
    }
    Ok(())
}

pub fn vacuum_basis(degree: usize, c: &Q) -> Result<Vec<VirasoroState>> {
    check_cap(degree)?;
    Ok(partitions(degree as i64, 2).iter().map(|p| VirasoroState::monomial(c, p, Q::one())).collect())
}

pub fn apply_l(m: i64, state: &VirasoroState) -> VirasoroState {
    VirasoroModule::vacuum(&state.c).apply_l(m, state)
}

pub fn gram_matrix(degree: usize, c: &Q) -> Result<Matrix> {
    check_cap(degree)?;
    Ok(VirasoroModule::vacuum(c).gram(degree))
}

fn coordinates(state: &VirasoroState, basis: &[Partition]) -> Vec<Q> {
    basis.iter().map(|p| state.coefficient(p)).collect()
}

/// `(2d/c)L(-2)𝟙`, `(d/c)L(-3)𝟙` and `3d/(c(5c+22))(4L(-2)²𝟙 + (c+2)L(-4)𝟙)`.
pub fn casimir_closed_form(c: &Q, d: &Q, n: usize) -> Result<VirasoroState> {
    match n {
        0 => Ok(VirasoroState::monomial(c, &[], d.clone())),
        1 => Ok(VirasoroState::zero(c)),
        2 => Ok(VirasoroState::monomial(c, &[2], qi(2) * d / c)),
        3 => Ok(VirasoroState::monomial(c, &[3], d / c)),
        4 => {
            let k = qi(3) * d / (c * (qi(5) * c + qi(22)));
            Ok(VirasoroState::monomial(c, &[2, 2], &k * qi(4)).add(&VirasoroState::monomial(c, &[4], k * (c + qi(2)))))
        }
        _ => Err(Error::UnsupportedOrder(n)),
    }
}

/// `X₄ = 3d(c+2)/(2c(5c+22))` and `Y₄ = 12d/(c(5c+22))`.
pub fn x4_y4(c: &Q, d: &Q) -> (Q, Q) {
    let den = c * (qi(5) * c + qi(22));
    (qi(3) * d * (c + qi(2)) / (qi(2) * &den), qi(12) * d / den)
}

/// `T^n ω` computed as `L(-1)^n L(-2)𝟙`.
pub fn translate_omega(c: &Q, n: usize) -> VirasoroState {
    let module = VirasoroModule::vacuum(c);
    let mut s = VirasoroState::monomial(c, &[2], Q::one());
    for _ in 0..n {
        s = module.apply_l(-1, &s);
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisCheck {
    pub degree: usize,
    #[serde(serialize_with = "ser::q")]
    pub c: Q,
    pub gram_nonsingular: bool,
    /// `c` is absent from the degenerate list up to this degree.
    pub not_listed: bool,
    pub agree: bool,
}

/// Gram nonsingularity in degrees `2..=n` against the degenerate central charge list.
pub fn no_singular_vectors(c: &Q, n: usize) -> Result<HypothesisCheck> {
    check_cap(n)?;
    let module = VirasoroModule::vacuum(c);
    let gram_nonsingular = (2..=n).all(|k| !module.gram(k).determinant().is_zero());
    let not_listed = !degenerate_central_charges_up_to(n as i64).contains(c);
    Ok(HypothesisCheck { degree: n, c: c.clone(), gram_nonsingular, not_listed, agree: gram_nonsingular == not_listed })
}

/// Solves `L(m)x = (n-1)κ_{n-m}` for `m = 1..n` with `κ₀ = d𝟙`, `κ₁ = 0`.
pub fn casimir_coefficients(c: &Q, d: &Q, n: usize) -> Result<VirasoroState> {
    check_cap(n)?;
    match n {
        0 => return Ok(VirasoroState::monomial(c, &[], d.clone())),
        1 => return Ok(VirasoroState::zero(c)),
        _ => {}
    }
    let module = VirasoroModule::vacuum(c);
    for k in 2..=n {
        if module.gram(k).determinant().is_zero() {
            let list: Vec<String> = degenerate_central_charges_up_to(n as i64).iter().map(fmt_q).collect();
            return Err(Error::SingularVirasoro { degree: k, c: c.clone(), degenerate: list.join(", ") });
        }
    }
    let lower: Vec<VirasoroState> = (0..n).map(|k| casimir_coefficients(c, d, k)).collect::<Result<_>>()?;
    let basis = module.basis(n);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for m in 1..=n {
        let target_basis = module.basis(n - m);
        let images: Vec<Vec<Q>> = basis
            .iter()
            .map(|p| coordinates(&module.apply_l(m as i64, &VirasoroState::monomial(c, p, Q::one())), &target_basis))
            .collect();
        let target = coordinates(&lower[n - m].scale(&qi(n as i64 - 1)), &target_basis);
        for (r, t) in target.into_iter().enumerate() {
            rows.push(images.iter().map(|col| col[r].clone()).collect::<Vec<_>>());
            rhs.push(t);
        }
    }
    let x = solve_overdetermined(&rows, &rhs)?;
    let mut out = VirasoroState::zero(c);
    for (p, v) in basis.iter().zip(x) {
        out = out.add(&VirasoroState::monomial(c, p, v));
    }
    Ok(out)
}

/// Unique solution of a consistent system with more equations than unknowns.
fn solve_overdetermined(rows: &[Vec<Q>], rhs: &[Q]) -> Result<Vec<Q>> {
    let unknowns = rows.first().map_or(0, Vec::len);
    let mut aug = Matrix::from_rows(
        rows.iter().zip(rhs).map(|(r, b)| r.iter().cloned().chain(std::iter::once(b.clone())).collect()).collect(),
    );
    let pivots = aug.rref();
    if pivots.contains(&unknowns) {
        return Err(Error::InconsistentSystem("L(m)x = (n-1)κ_{n-m} has no solution".into()));
    }
    if pivots.len() < unknowns {
        return Err(Error::InconsistentSystem("L(m)x = (n-1)κ_{n-m} has no unique solution".into()));
    }
    Ok((0..unknowns).map(|i| aug[(i, unknowns)].clone()).collect())
}

/// `L(m)x = (n-1)κ_{n-m}` for `m = 1..n`.
pub fn check_lowering_relations(state: &VirasoroState, d: &Q, n: usize) -> Result<bool> {
    let module = VirasoroModule::vacuum(&state.c);
    for m in 1..=n {
        let lhs = module.apply_l(m as i64, state);
        let rhs = casimir_coefficients(&state.c, d, n - m)?.scale(&qi(n as i64 - 1));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generalized binomial coefficient `C(m, j)` for any integer `m`.
fn binomial(m: i64, j: i64) -> Q {
    let mut acc = Q::one();
    for i in 0..j {
        acc = acc * qi(m - i) / qi(i + 1);
    }
    acc
}

/// Mode `v_(n)` of a vacuum monomial acting on a state of `module`, through the
/// iterate formula for `(ω_(m) b)_(n)` with `ω_(k) = L(k-1)`.
fn vertex_mode(module: &VirasoroModule, v: &[i64], n: i64, x: &Terms) -> Terms {
    let Some((&n1, rest)) = v.split_first() else {
        return if n == -1 { x.clone() } else { Terms::new() };
    };
    let m = 1 - n1;
    let wb: i64 = rest.iter().sum();
    let max_degree = x.keys().map(|p| p.iter().sum::<i64>()).max().unwrap_or(0);
    let mut out = Terms::new();
    let span = (max_degree + wb - n).max(max_degree + 1).max(0);
    for j in 0..=span {
        let coeff = if j % 2 == 0 { binomial(m, j) } else { -binomial(m, j) };
        if coeff.is_zero() {
            continue;
        }
        // ω_(m-j) b_(n+j) x
        let inner = vertex_mode(module, rest, n + j, x);
        if !inner.is_empty() {
            add_into(&mut out, &module.apply_terms(m - j - 1, &inner), &coeff);
        }
        // -(-1)^m b_(m+n-j) ω_(j) x
        let lx = module.apply_terms(j - 1, x);
        if !lx.is_empty() {
            let sign = if m.rem_euclid(2) == 0 { -Q::one() } else { Q::one() };
            add_into(&mut out, &vertex_mode(module, rest, m + n - j, &lx), &(&coeff * sign));
        }
    }
    out
}

/// `Tr o(v)` over `d` weight-one primaries, where `o(v) = v_(3)` for degree-4 `v`.
pub fn descendant_zero_mode_trace_on_primaries(state: &VirasoroState, d: &Q) -> Result<Q> {
    if state.is_zero() {
        return Ok(Q::zero());
    }
    match state.degree() {
        Some(4) => {}
        found => return Err(Error::WrongDegree { expected: 4, found: found.unwrap_or(0) }),
    }
    let module = VirasoroModule::verma(&state.c, &Q::one());
    let primary: Terms = [(Vec::new(), Q::one())].into();
    let mut acc = Q::zero();
    for (p, c) in state.terms() {
        let image = vertex_mode(&module, p, 3, &primary);
        for key in image.keys() {
            if !key.is_empty() {
                return Err(Error::Assertion(format!("zero mode left the primary space: {key:?}")));
            }
        }
        acc += c * image.get(&Vec::new()).cloned().unwrap_or_else(Q::zero);
    }
    Ok(acc * d)
}

/// Coefficients of a polynomial in `c` from exact values at `0, 1, …, deg`.
fn interpolate(values: &[(Q, Q)]) -> Vec<Q> {
    let n = values.len();
    let mut coeffs = vec![Q::zero(); n];
    for (i, (xi, yi)) in values.iter().enumerate() {
        // Lagrange basis polynomial for node i.
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for (j, (xj, _)) in values.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += b * yi / &denom;
        }
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

/// Divides by `(c - root)`; returns `None` when `root` is not a root.
fn deflate(p: &[Q], root: &Q) -> Option<Vec<Q>> {
    let n = p.len();
    if n < 2 {
        return None;
    }
    let mut quotient = vec![Q::zero(); n - 1];
    let mut carry = Q::zero();
    for k in (1..n).rev() {
        carry = &p[k] + carry * root;
        quotient[k - 1] = carry.clone();
    }
    let remainder = &p[0] + carry * root;
    remainder.is_zero().then_some(quotient)
}

#[derive(Clone, Debug)]
pub struct DeterminantRoots {
    pub degree: usize,
    /// Coefficients of `det Gram(c)`, constant term first.
    pub polynomial: Vec<Q>,
    /// Degenerate values with their multiplicity as roots.
    pub multiplicities: Vec<(Q, usize)>,
    /// What is left after dividing out the degenerate roots.
    pub cofactor: Vec<Q>,
}

impl DeterminantRoots {
    /// Every root of the determinant is a listed degenerate value.
    pub fn only_degenerate_roots(&self) -> bool {
        self.cofactor.len() == 1 && !self.cofactor[0].is_zero()
    }
}

impl Serialize for DeterminantRoots {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DeterminantRoots", 4)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("polynomial", &self.polynomial.iter().map(fmt_q).collect::<Vec<_>>())?;
        st.serialize_field(
            "multiplicities",
            &self.multiplicities.iter().map(|(c, m)| (fmt_q(c), *m)).collect::<Vec<_>>(),
        )?;
        st.serialize_field("only_degenerate_roots", &self.only_degenerate_roots())?;
        st.end()
    }
}

/// The degree-`n` Gram determinant as a polynomial in `c` and its roots among
/// the degenerate central charges for degrees `≤ n`.
pub fn gram_determinant_roots(degree: usize) -> Result<DeterminantRoots> {
    check_cap(degree)?;
    let basis = partitions(degree as i64, 2);
    let bound: usize = basis.iter().map(Vec::len).sum();
    let values: Vec<(Q, Q)> = (0..=bound as i64)
        .map(|x| {
            let c = qi(x + 1);
            let det = VirasoroModule::vacuum(&c).gram(degree).determinant();
            (c, det)
        })
        .collect();
    let polynomial = if basis.is_empty() { vec![Q::one()] } else { interpolate(&values) };
    let mut cofactor = polynomial.clone();
    let mut multiplicities = Vec::new();
    for root in degenerate_central_charges_up_to(degree as i64) {
        let mut mult = 0;
        while let Some(next) = deflate(&cofactor, &root) {
            cofactor = next;
            mult += 1;
        }
        multiplicities.push((root, mult));
    }
    Ok(DeterminantRoots { degree, polynomial, multiplicities, cofactor })
}

/// `2L(-4)𝟙`, the image of `ω_(-3)𝟙` under `T²ω/2! = ω_(-3)𝟙`.
pub fn t_relation_holds(c: &Q) -> bool {
    translate_omega(c, 2) == VirasoroState::monomial(c, &[4], qi(2))
}

/// `X₄T²ω + Y₄ω_(-1)ω` against the solved `κ₄`.
pub fn kappa4_from_translation(c: &Q, d: &Q) -> Result<bool> {
    let (x4, y4) = x4_y4(c, d);
    let candidate = translate_omega(c, 2).scale(&x4).add(&VirasoroState::monomial(c, &[2, 2], y4));
    Ok(candidate == casimir_coefficients(c, d, 4)?)
}

/// Value of `c` used for generic symbolic spot checks.
pub fn spot_central_charges() -> Vec<Q> {
    vec![q(1, 2), q(-1, 3), q(7, 11), qi(26), q(-3, 5)]
}
