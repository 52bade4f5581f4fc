//! Simple Lie algebras in a Chevalley basis and adjoint trace identities.
//!
//! Basis order: positive root vectors (by height), then `h_1..h_r`, then the
//! negative root vectors in the same order as the positive ones. All structure
//! constants are integers; they are stored as `i64` and exposed as rationals.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{q, qi, ser, Q};
use crate::root_system::{build_root_system, RootSystem, TypeLabel};

/// Seed used by every sampled verification unless overridden.
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// Index into [`RootSystem::all_roots`].
    Root(usize),
    Cartan(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct LieAlgebraData {
    pub type_label: TypeLabel,
    pub rank: usize,
    pub dim: usize,
    pub dual_coxeter: usize,
    #[serde(serialize_with = "ser::q")]
    pub central_charge_level1: Q,
    pub basis: Vec<String>,
    #[serde(skip)]
    pub root_system: RootSystem,
    #[serde(skip)]
    roots: Vec<Vec<i64>>,
    /// `[b_i, b_j]` stored sparsely at `i * dim + j`.
    #[serde(skip)]
    brackets: Vec<Vec<(usize, i64)>>,
    /// Nonzero entries of `φ(b_i, ·)`.
    #[serde(skip)]
    form_rows: Vec<Vec<(usize, Q)>>,
}

/// Structure constants `N_{a,b}` from the values on special pairs.
struct StructureConstants<'a> {
    rs: &'a RootSystem,
    special: HashMap<(usize, usize), i64>,
}

impl StructureConstants<'_> {
    fn npos(&self) -> usize {
        self.rs.num_positive_roots()
    }

    fn norm(&self, v: &[i64]) -> Q {
        self.rs.norm_i64(v)
    }

    fn integral(&self, v: Q, what: &str) -> Result<i64> {
        if v.is_integer() {
            Ok(v.to_integer().to_i64().expect("small structure constant"))
        } else {
            Err(Error::SignConsistency(format!("non-integral {what}: {v}")))
        }
    }

    /// `N_{a,b}`; zero when `a + b` is not a root.
    fn get(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let Some(isum) = self.rs.root_index(&sum) else {
            return Ok(0);
        };
        let n = self.npos();
        let ia = self.rs.root_index(a).expect("a is a root");
        let ib = self.rs.root_index(b).expect("b is a root");
        let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        match (ia < n, ib < n) {
            (true, true) => {
                if ia < ib {
                    self.special.get(&(ia, ib)).copied().ok_or_else(|| {
                        Error::SignConsistency(format!("special pair {a:?}, {b:?} requested before it was set"))
                    })
                } else {
                    Ok(-self.get(b, a)?)
                }
            }
            (false, false) => Ok(-self.get(&neg(a), &neg(b))?),
            (false, true) => Ok(-self.get(b, a)?),
            (true, false) => {
                let c = neg(&sum);
                if isum < n {
                    let v = -self.norm(&c) / self.norm(a) * qi(self.get(&neg(b), &sum)?);
                    self.integral(v, "mixed structure constant")
                } else {
                    let v = self.norm(&c) / self.norm(b) * qi(self.get(&c, a)?);
                    self.integral(v, "mixed structure constant")
                }
            }
        }
    }

    /// Largest `p` with `b - p a` a root.
    fn string_below(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut p = 0;
        let mut v = b.to_vec();
        loop {
            for (x, y) in v.iter_mut().zip(a) {
                *x -= y;
            }
            if self.rs.is_root(&v) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    fn build(rs: &RootSystem) -> Result<StructureConstants<'_>> {
        let mut sc = StructureConstants { rs, special: HashMap::new() };
        let pos = &rs.positive_roots;
        let n = pos.len();
        let sub = |x: &[i64], y: &[i64]| x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>();
        for (iz, zeta) in pos.iter().enumerate() {
            let pairs: Vec<(usize, usize)> = (0..iz)
                .filter_map(|ix| {
                    let eta = sub(zeta, &pos[ix]);
                    match rs.root_index(&eta) {
                        Some(ie) if ie < n && ix < ie => Some((ix, ie)),
                        _ => None,
                    }
                })
                .collect();
            let Some(&(ia, ib)) = pairs.first() else {
                continue;
            };
            let (alpha, beta) = (&pos[ia], &pos[ib]);
            let n_ab = sc.string_below(alpha, beta) + 1;
            sc.special.insert((ia, ib), n_ab);
            let zeta_norm = rs.norm_i64(zeta);
            for &(ix, ie) in &pairs[1..] {
                let (xi, eta) = (&pos[ix], &pos[ie]);
                let neg_xi: Vec<i64> = xi.iter().map(|x| -x).collect();
                let neg_eta: Vec<i64> = eta.iter().map(|x| -x).collect();
                let mut acc = Q::zero();
                let b_minus_xi = sub(beta, xi);
                if rs.is_root(&b_minus_xi) {
                    acc += qi(sc.get(beta, &neg_xi)? * sc.get(alpha, &neg_eta)?) / rs.norm_i64(&b_minus_xi);
                }
                let a_minus_xi = sub(alpha, xi);
                if rs.is_root(&a_minus_xi) {
                    acc += qi(sc.get(&neg_xi, alpha)? * sc.get(beta, &neg_eta)?) / rs.norm_i64(&a_minus_xi);
                }
                let v = &zeta_norm / qi(n_ab) * acc;
                let v = sc.integral(v, "special-pair structure constant")?;
                sc.special.insert((ix, ie), v);
            }
        }
        // Every N_{a,b} must be ±(p+1).
        let all = rs.all_roots();
        for a in &all {
            for b in &all {
                let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if !rs.is_root(&sum) {
                    continue;
                }
                let v = sc.get(a, b)?;
                let expected = sc.string_below(a, b) + 1;
                if v.abs() != expected {
                    return Err(Error::SignConsistency(format!(
                        "|N({a:?}, {b:?})| = {} but the root string gives {expected}",
                        v.abs()
                    )));
                }
            }
        }
        Ok(sc)
    }
}

pub fn build_chevalley(rs: &RootSystem) -> Result<LieAlgebraData> {
    let sc = StructureConstants::build(rs)?;
    let r = rs.rank;
    let n = rs.num_positive_roots();
    let dim = 2 * n + r;
    let roots = rs.all_roots();
    let kind = |b: usize| {
        if b < n {
            BasisKind::Root(b)
        } else if b < n + r {
            BasisKind::Cartan(b - n)
        } else {
            BasisKind::Root(b - r)
        }
    };
    let root_basis = |k: usize| if k < n { k } else { k + r };

    // Coroot of a root in the basis h_i = α_i^∨.
    let coroot = |a: &[i64]| -> Result<Vec<(usize, i64)>> {
        let norm = rs.norm_i64(a);
        let mut out = Vec::new();
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            let v = qi(a[i]) * &rs.gram[(i, i)] / &norm;
            if !v.is_integer() {
                return Err(Error::SignConsistency(format!("non-integral coroot coefficient for {a:?}")));
            }
            out.push((n + i, v.to_integer().to_i64().expect("small")));
        }
        Ok(out)
    };

    let mut brackets = vec![Vec::new(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let entry = match (kind(i), kind(j)) {
                (BasisKind::Cartan(_), BasisKind::Cartan(_)) => Vec::new(),
                (BasisKind::Cartan(ci), BasisKind::Root(kb)) => {
                    let p = rs.coroot_pairing(&roots[kb], ci);
                    if p == 0 {
                        Vec::new()
                    } else {
                        vec![(j, p)]
                    }
                }
                (BasisKind::Root(ka), BasisKind::Cartan(cj)) => {
                    let p = rs.coroot_pairing(&roots[ka], cj);
                    if p == 0 {
                        Vec::new()
                    } else {
                        vec![(i, -p)]
                    }
                }
                (BasisKind::Root(ka), BasisKind::Root(kb)) => {
                    let (a, b) = (&roots[ka], &roots[kb]);
                    let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    if sum.iter().all(|&x| x == 0) {
                        coroot(a)?
                    } else if let Some(ks) = rs.root_index(&sum) {
                        vec![(root_basis(ks), sc.get(a, b)?)]
                    } else {
                        Vec::new()
                    }
                }
            };
            brackets[i * dim + j] = entry;
        }
    }

    let mut form_rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); dim];
    for (i, row) in form_rows.iter_mut().enumerate() {
        match kind(i) {
            BasisKind::Cartan(ci) => {
                for cj in 0..r {
                    let v = qi(4) * &rs.gram[(ci, cj)] / (&rs.gram[(ci, ci)] * &rs.gram[(cj, cj)]);
                    if !v.is_zero() {
                        row.push((n + cj, v));
                    }
                }
            }
            BasisKind::Root(k) => {
                let opposite = if k < n { k + n } else { k - n };
                row.push((root_basis(opposite), qi(2) / rs.norm_i64(&roots[k])));
            }
        }
    }

    let basis = (0..dim)
        .map(|b| match kind(b) {
            BasisKind::Cartan(i) if r == 1 && i == 0 => "h".to_string(),
            BasisKind::Cartan(i) => format!("h{}", i + 1),
            BasisKind::Root(k) if r == 1 => (if k < n { "e" } else { "f" }).to_string(),
            BasisKind::Root(k) => {
                let coords: Vec<String> = roots[k].iter().map(|x| x.abs().to_string()).collect();
                format!("{}({})", if k < n { "e" } else { "f" }, coords.join(","))
            }
        })
        .collect();

    let dual_coxeter = rs.dual_coxeter;
    Ok(LieAlgebraData {
        type_label: rs.type_label,
        rank: r,
        dim,
        dual_coxeter,
        central_charge_level1: q(dim as i64, 1 + dual_coxeter as i64),
        basis,
        root_system: rs.clone(),
        roots,
        brackets,
        form_rows,
    })
}

/// Convenience: build the root system and the Chevalley basis in one step.
pub fn lie_algebra(type_label: TypeLabel) -> Result<LieAlgebraData> {
    build_chevalley(&build_root_system(type_label)?)
}

/// Dense integer matrix used by the trace fast path.
#[derive(Clone, Debug)]
struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    fn max_abs(&self) -> u128 {
        self.data.iter().map(|x| x.unsigned_abs() as u128).max().unwrap_or(0)
    }

    /// Product, or `None` if an entry could leave the `i64` range.
    fn mul(&self, o: &IntMatrix) -> Option<IntMatrix> {
        let n = self.n;
        let bound = (n as u128).checked_mul(self.max_abs())?.checked_mul(o.max_abs())?;
        if bound > i64::MAX as u128 {
            return None;
        }
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                let orow = &o.data[k * n..(k + 1) * n];
                for (x, &b) in row.iter_mut().zip(orow) {
                    *x += a * b;
                }
            }
        }
        Some(IntMatrix { n, data: out })
    }

    /// `Tr(self · o)` in `i128`, or `None` on possible overflow.
    fn trace_mul(&self, o: &IntMatrix) -> Option<i128> {
        let n = self.n;
        let bound = (n as u128 * n as u128).checked_mul(self.max_abs())?.checked_mul(o.max_abs())?;
        if bound > i128::MAX as u128 {
            return None;
        }
        let mut acc = 0i128;
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a != 0 {
                    acc += a as i128 * o.data[j * n + i] as i128;
                }
            }
        }
        Some(acc)
    }

    fn trace(&self) -> i128 {
        (0..self.n).map(|i| self.data[i * self.n + i] as i128).sum()
    }
}

impl LieAlgebraData {
    pub fn num_positive_roots(&self) -> usize {
        self.root_system.num_positive_roots()
    }

    pub fn kind(&self, b: usize) -> BasisKind {
        let n = self.num_positive_roots();
        if b < n {
            BasisKind::Root(b)
        } else if b < n + self.rank {
            BasisKind::Cartan(b - n)
        } else {
            BasisKind::Root(b - self.rank)
        }
    }

    /// Basis index of the root vector `e_a`.
    pub fn root_vector_index(&self, a: &[i64]) -> Option<usize> {
        let n = self.num_positive_roots();
        self.root_system.root_index(a).map(|k| if k < n { k } else { k + self.rank })
    }

    pub fn cartan_index(&self, i: usize) -> usize {
        self.num_positive_roots() + i
    }

    pub fn root_of(&self, b: usize) -> Option<&[i64]> {
        match self.kind(b) {
            BasisKind::Root(k) => Some(&self.roots[k]),
            BasisKind::Cartan(_) => None,
        }
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        v[i] = Q::one();
        v
    }

    /// `[b_i, b_j]` as sparse integer coordinates.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.brackets[i * self.dim + j]
    }

    pub fn basis_form(&self, i: usize, j: usize) -> Q {
        self.form_rows[i].iter().find(|(k, _)| *k == j).map_or_else(Q::zero, |(_, v)| v.clone())
    }

    pub fn form_row(&self, i: usize) -> &[(usize, Q)] {
        &self.form_rows[i]
    }

    /// The normalized invariant form as a dense matrix.
    pub fn form_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (i, row) in self.form_rows.iter().enumerate() {
            for (j, v) in row {
                m[(i, *j)] = v.clone();
            }
        }
        m
    }

    fn check_dim(&self, x: &[Q]) -> Result<()> {
        if x.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found: x.len() })
        }
    }

    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Result<Vec<Q>> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut out = vec![Q::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let coeff = xi * yj;
                for &(k, c) in self.basis_bracket(i, j) {
                    out[k] += &coeff * qi(c);
                }
            }
        }
        Ok(out)
    }

    pub fn form(&self, x: &[Q], y: &[Q]) -> Result<Q> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let mut acc = Q::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, v) in &self.form_rows[i] {
                if !y[*j].is_zero() {
                    acc += xi * v * &y[*j];
                }
            }
        }
        Ok(acc)
    }

    /// Dual basis `x^j` with `φ(x^j, b_k) = δ_{jk}`.
    pub fn dual_basis(&self) -> Vec<Vec<Q>> {
        let n = self.num_positive_roots();
        let r = self.rank;
        let mut cartan = Matrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                cartan[(i, j)] = self.basis_form(n + i, n + j);
            }
        }
        let inv = cartan.inverse().expect("form is nondegenerate on the Cartan subalgebra");
        (0..self.dim)
            .map(|b| {
                let mut v = vec![Q::zero(); self.dim];
                match self.kind(b) {
                    BasisKind::Cartan(i) => {
                        for j in 0..r {
                            v[n + j] = inv[(i, j)].clone();
                        }
                    }
                    BasisKind::Root(_) => {
                        let (k, val) = &self.form_rows[b][0];
                        v[*k] = val.recip();
                    }
                }
                v
            })
            .collect()
    }

    /// `ad(x)` as an exact matrix on the basis.
    pub fn ad_matrix(&self, x: &[Q]) -> Result<Matrix> {
        self.check_dim(x)?;
        let d = self.dim;
        let mut m = Matrix::zeros(d, d);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..d {
                for &(k, c) in self.basis_bracket(i, j) {
                    m[(k, j)] += xi * qi(c);
                }
            }
        }
        Ok(m)
    }

    fn ad_int(&self, x: &[i64]) -> IntMatrix {
        let d = self.dim;
        let mut data = vec![0i64; d * d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for j in 0..d {
                for &(k, c) in self.basis_bracket(i, j) {
                    data[k * d + j] += xi * c;
                }
            }
        }
        IntMatrix { n: d, data }
    }

    /// `Tr ad(a_1) ad(a_2) ... ad(a_m)`.
    pub fn trace_ad_product(&self, args: &[Vec<Q>]) -> Result<Q> {
        if args.is_empty() {
            return Err(Error::InvalidArgument("trace of an empty product".into()));
        }
        for a in args {
            self.check_dim(a)?;
        }
        // Clear denominators, take the integer trace, divide back.
        let mut scale = BigInt::one();
        let mut ints: Vec<Vec<i64>> = Vec::with_capacity(args.len());
        for a in args {
            let den = a.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let v: Option<Vec<i64>> = a.iter().map(|x| (x.numer() * (&den / x.denom())).to_i64()).collect();
            match v {
                Some(v) => ints.push(v),
                None => return self.trace_ad_product_exact(args),
            }
            scale *= den;
        }
        let mats: Vec<IntMatrix> = ints.iter().map(|v| self.ad_int(v)).collect();
        match int_trace(&mats) {
            Some(t) => Ok(Q::new(BigInt::from(t), scale)),
            None => self.trace_ad_product_exact(args),
        }
    }

    fn trace_ad_product_exact(&self, args: &[Vec<Q>]) -> Result<Q> {
        let mut m = self.ad_matrix(&args[0])?;
        for a in &args[1..] {
            m = m.mul(&self.ad_matrix(a)?);
        }
        Ok(m.trace())
    }

    /// Trace of a product of basis-element ad operators, by applying them to each basis vector.
    pub fn trace_basis_product(&self, idx: &[usize]) -> i64 {
        let d = self.dim;
        let mut cur = vec![0i64; d];
        let mut next = vec![0i64; d];
        let mut total = 0i64;
        for l in 0..d {
            cur.iter_mut().for_each(|x| *x = 0);
            cur[l] = 1;
            for &i in idx.iter().rev() {
                next.iter_mut().for_each(|x| *x = 0);
                for (j, &v) in cur.iter().enumerate() {
                    if v == 0 {
                        continue;
                    }
                    for &(k, c) in self.basis_bracket(i, j) {
                        next[k] += c * v;
                    }
                }
                std::mem::swap(&mut cur, &mut next);
            }
            total += cur[l];
        }
        total
    }

    /// Checks `Tr ad(b_i) ad(b_j) = 2h∨ φ(b_i, b_j)` on every pair of basis elements.
    pub fn killing_check(&self) -> KillingReport {
        let d = self.dim;
        let two_h = qi(2 * self.dual_coxeter as i64);
        let mut counterexample = None;
        'outer: for i in 0..d {
            for j in 0..d {
                // Tr(ad b_i ad b_j) = Σ_l Σ_k [b_j, b_l]_k [b_i, b_k]_l
                let mut t = 0i64;
                for l in 0..d {
                    for &(k, c) in self.basis_bracket(j, l) {
                        if let Some(&(_, c2)) = self.basis_bracket(i, k).iter().find(|(m, _)| *m == l) {
                            t += c * c2;
                        }
                    }
                }
                let expected = &two_h * self.basis_form(i, j);
                if qi(t) != expected {
                    counterexample =
                        Some(format!("Tr ad({}) ad({}) = {t}, 2h∨φ = {expected}", self.basis[i], self.basis[j]));
                    break 'outer;
                }
            }
        }
        KillingReport {
            type_label: self.type_label,
            pairs_checked: d * d,
            passed: counterexample.is_none(),
            counterexample,
        }
    }

    fn sparse_bracket(&self, i: usize, v: &[(usize, i64)]) -> HashMap<usize, i64> {
        let mut out: HashMap<usize, i64> = HashMap::new();
        for &(j, c) in v {
            for &(k, c2) in self.basis_bracket(i, j) {
                *out.entry(k).or_default() += c * c2;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Antisymmetry and Jacobi on all basis pairs and triples. Returns the first failure.
    pub fn check_jacobi(&self) -> Option<String> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                let mut a: Vec<(usize, i64)> = self.basis_bracket(i, j).to_vec();
                let mut b: Vec<(usize, i64)> = self.basis_bracket(j, i).iter().map(|&(k, c)| (k, -c)).collect();
                a.sort_unstable();
                b.sort_unstable();
                if a != b {
                    return Some(format!("antisymmetry fails for ({}, {})", self.basis[i], self.basis[j]));
                }
            }
        }
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    let mut acc: HashMap<usize, i64> = HashMap::new();
                    for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
                        for (k, c) in self.sparse_bracket(p, self.basis_bracket(q, r)) {
                            *acc.entry(k).or_default() += c;
                        }
                    }
                    if acc.values().any(|&v| v != 0) {
                        return Some(format!(
                            "Jacobi fails for ({}, {}, {})",
                            self.basis[x], self.basis[y], self.basis[z]
                        ));
                    }
                }
            }
        }
        None
    }

    /// `φ([x,y],z) + φ(y,[x,z]) = 0` on all basis triples. Returns the first failure.
    pub fn check_invariance(&self) -> Option<String> {
        let d = self.dim;
        let pair = |v: &[(usize, i64)], z: usize| -> Q {
            v.iter().fold(Q::zero(), |acc, &(k, c)| acc + qi(c) * self.basis_form(k, z))
        };
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    let lhs = pair(self.basis_bracket(x, y), z) + pair(self.basis_bracket(x, z), y);
                    if !lhs.is_zero() {
                        return Some(format!(
                            "invariance fails for ({}, {}, {})",
                            self.basis[x], self.basis[y], self.basis[z]
                        ));
                    }
                }
            }
        }
        None
    }
}

fn int_trace(mats: &[IntMatrix]) -> Option<i128> {
    if mats.len() == 1 {
        return Some(mats[0].trace());
    }
    let half = mats.len().div_ceil(2);
    let left = mats[1..half].iter().try_fold(mats[0].clone(), |acc, m| acc.mul(m))?;
    let right = mats[half + 1..].iter().try_fold(mats[half].clone(), |acc, m| acc.mul(m))?;
    left.trace_mul(&right)
}

#[derive(Clone, Debug, Serialize)]
pub struct KillingReport {
    pub type_label: TypeLabel,
    pub pairs_checked: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

/// Coefficients of `([a1,a2]|[a3,a4])`, `([a1,a4]|[a2,a3])` and the symmetric
/// form product in the quartic trace formula.
pub fn quartic_coefficients(c: &Q, d: &Q) -> Result<[Q; 3]> {
    if c.is_zero() {
        return Err(Error::ExcludedCentralCharge { value: c.clone(), order: 4 });
    }
    let denom = c * (qi(22) + qi(5) * c);
    if denom.is_zero() {
        return Err(Error::ExcludedCentralCharge { value: c.clone(), order: 4 });
    }
    let k = qi(24) * d / &denom;
    Ok([Q::one() + qi(3) * d * (c - qi(2)) / &denom, qi(2) - &k, k])
}

/// Closed-form right-hand side of the order-2, 3 or 4 adjoint trace identity.
pub fn trace_formula_rhs(g: &LieAlgebraData, c: &Q, d: &Q, args: &[Vec<Q>], order: usize) -> Result<Q> {
    if !(2..=4).contains(&order) {
        return Err(Error::UnsupportedOrder(order));
    }
    if args.len() != order {
        return Err(Error::InvalidArgument(format!("order {order} needs {order} arguments, got {}", args.len())));
    }
    if c.is_zero() {
        return Err(Error::ExcludedCentralCharge { value: c.clone(), order });
    }
    let ratio = d / c - Q::one();
    match order {
        2 => Ok(qi(2) * ratio * g.form(&args[0], &args[1])?),
        3 => Ok(ratio * g.form(&args[0], &g.bracket(&args[1], &args[2])?)?),
        _ => {
            let [ca, cb, cs] = quartic_coefficients(c, d)?;
            let (a1, a2, a3, a4) = (&args[0], &args[1], &args[2], &args[3]);
            let p = g.form(&g.bracket(a1, a2)?, &g.bracket(a3, a4)?)?;
            let qq = g.form(&g.bracket(a1, a4)?, &g.bracket(a2, a3)?)?;
            let s = g.form(a1, a2)? * g.form(a3, a4)?
                + g.form(a1, a3)? * g.form(a2, a4)?
                + g.form(a1, a4)? * g.form(a2, a3)?;
            Ok(ca * p + cb * qq + cs * s)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceCheckConfig {
    pub exhaustive: bool,
    pub samples: usize,
    pub seed: u64,
}

impl TraceCheckConfig {
    /// Exhaustive for `dim ≤ 14`, otherwise 20 seeded samples.
    pub fn default_for(g: &LieAlgebraData) -> Self {
        TraceCheckConfig { exhaustive: g.dim <= 14, samples: 20, seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceReport {
    pub type_label: TypeLabel,
    pub dim: usize,
    #[serde(serialize_with = "ser::q")]
    pub c: Q,
    #[serde(serialize_with = "ser::q")]
    pub d: Q,
    pub mode: String,
    pub seed: Option<u64>,
    pub order2_checked: usize,
    pub order3_checked: usize,
    pub order4_checked: usize,
    pub reversal_checked: usize,
    pub cyclic_checked: usize,
    pub odd_vanishing_checked: usize,
    pub passed: bool,
    pub counterexample: Option<String>,
}

pub fn verify_trace_formulas(g: &LieAlgebraData, config: &TraceCheckConfig) -> Result<TraceReport> {
    let c = g.central_charge_level1.clone();
    let d = qi(g.dim as i64);
    let mut report = TraceReport {
        type_label: g.type_label,
        dim: g.dim,
        c: c.clone(),
        d: d.clone(),
        mode: if config.exhaustive { "exhaustive" } else { "sampled" }.to_string(),
        seed: if config.exhaustive { None } else { Some(config.seed) },
        order2_checked: 0,
        order3_checked: 0,
        order4_checked: 0,
        reversal_checked: 0,
        cyclic_checked: 0,
        odd_vanishing_checked: 0,
        passed: true,
        counterexample: None,
    };
    if config.exhaustive {
        exhaustive_traces(g, &c, &d, &mut report)?;
    } else {
        sampled_traces(g, &c, &d, config, &mut report)?;
    }
    report.passed = report.counterexample.is_none();
    Ok(report)
}

fn fail(report: &mut TraceReport, msg: String) {
    if report.counterexample.is_none() {
        report.counterexample = Some(msg);
    }
}

fn exhaustive_traces(g: &LieAlgebraData, c: &Q, d: &Q, report: &mut TraceReport) -> Result<()> {
    let dim = g.dim;
    let ratio = d / c - Q::one();
    let [ca, cb, cs] = quartic_coefficients(c, d)?;
    let form_sparse = |u: &[(usize, i64)], v: &[(usize, i64)]| -> Q {
        let mut acc = Q::zero();
        for &(i, a) in u {
            for &(j, b) in v {
                let f = g.basis_form(i, j);
                if !f.is_zero() {
                    acc += f * qi(a * b);
                }
            }
        }
        acc
    };
    let name = |t: &[usize]| t.iter().map(|&i| g.basis[i].as_str()).collect::<Vec<_>>().join(", ");

    for i in 0..dim {
        for j in 0..dim {
            let lhs = qi(g.trace_basis_product(&[i, j]));
            let rhs = qi(2) * &ratio * g.basis_form(i, j);
            report.order2_checked += 1;
            if lhs != rhs {
                fail(report, format!("order 2 ({}): {lhs} ≠ {rhs}", name(&[i, j])));
            }
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let lhs = g.trace_basis_product(&[i, j, k]);
                let rhs = &ratio * form_sparse(&[(i, 1)], g.basis_bracket(j, k));
                report.order3_checked += 1;
                if qi(lhs) != rhs {
                    fail(report, format!("order 3 ({}): {lhs} ≠ {rhs}", name(&[i, j, k])));
                }
                let rev = g.trace_basis_product(&[k, j, i]);
                report.reversal_checked += 1;
                if rev != -lhs {
                    fail(report, format!("reversal ({}): {lhs} vs {rev}", name(&[i, j, k])));
                }
            }
        }
    }
    for i in 0..dim {
        let cubic = g.trace_basis_product(&[i, i, i]);
        let quintic = g.trace_basis_product(&[i, i, i, i, i]);
        report.odd_vanishing_checked += 2;
        if cubic != 0 || quintic != 0 {
            fail(report, format!("odd power trace of {} is nonzero", g.basis[i]));
        }
    }
    for a1 in 0..dim {
        for a2 in 0..dim {
            let b12 = g.basis_bracket(a1, a2);
            for a3 in 0..dim {
                for a4 in 0..dim {
                    let t = [a1, a2, a3, a4];
                    let lhs = g.trace_basis_product(&t);
                    let p = form_sparse(b12, g.basis_bracket(a3, a4));
                    let qq = form_sparse(g.basis_bracket(a1, a4), g.basis_bracket(a2, a3));
                    let s = g.basis_form(a1, a2) * g.basis_form(a3, a4)
                        + g.basis_form(a1, a3) * g.basis_form(a2, a4)
                        + g.basis_form(a1, a4) * g.basis_form(a2, a3);
                    let rhs = &ca * p + &cb * qq + &cs * s;
                    report.order4_checked += 1;
                    if qi(lhs) != rhs {
                        fail(report, format!("order 4 ({}): {lhs} ≠ {rhs}", name(&t)));
                    }
                    let rev = g.trace_basis_product(&[a4, a3, a2, a1]);
                    report.reversal_checked += 1;
                    if rev != lhs {
                        fail(report, format!("reversal ({}): {lhs} vs {rev}", name(&t)));
                    }
                    let cyc = g.trace_basis_product(&[a2, a3, a4, a1]);
                    report.cyclic_checked += 1;
                    if cyc != lhs {
                        fail(report, format!("cyclic ({}): {lhs} vs {cyc}", name(&t)));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Random element with coordinates in `{-2, ..., 2}`.
pub fn random_element(g: &LieAlgebraData, rng: &mut ChaCha8Rng) -> Vec<i64> {
    (0..g.dim).map(|_| rng.gen_range(-2..=2)).collect()
}

fn sampled_traces(g: &LieAlgebraData, c: &Q, d: &Q, config: &TraceCheckConfig, report: &mut TraceReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let to_q = |v: &[i64]| v.iter().map(|&x| qi(x)).collect::<Vec<Q>>();
    for s in 0..config.samples {
        let xs: Vec<Vec<i64>> = (0..4).map(|_| random_element(g, &mut rng)).collect();
        let qs: Vec<Vec<Q>> = xs.iter().map(|x| to_q(x)).collect();
        let mats: Vec<IntMatrix> = xs.iter().map(|x| g.ad_int(x)).collect();
        let tr = |idx: &[usize]| -> Result<Q> {
            let chosen: Vec<IntMatrix> = idx.iter().map(|&i| mats[i].clone()).collect();
            match int_trace(&chosen) {
                Some(t) => Ok(Q::from_integer(BigInt::from(t))),
                None => g.trace_ad_product_exact(&idx.iter().map(|&i| qs[i].clone()).collect::<Vec<_>>()),
            }
        };
        let (a, b, cm, dm) = (0, 1, 2, 3);

        let lhs2 = tr(&[a, b])?;
        let rhs2 = trace_formula_rhs(g, c, d, &qs[..2], 2)?;
        report.order2_checked += 1;
        if lhs2 != rhs2 {
            fail(report, format!("sample {s}, order 2: {lhs2} ≠ {rhs2}"));
        }

        let lhs3 = tr(&[a, b, cm])?;
        let rhs3 = trace_formula_rhs(g, c, d, &qs[..3], 3)?;
        report.order3_checked += 1;
        if lhs3 != rhs3 {
            fail(report, format!("sample {s}, order 3: {lhs3} ≠ {rhs3}"));
        }
        let rev3 = tr(&[cm, b, a])?;
        report.reversal_checked += 1;
        if rev3 != -lhs3.clone() {
            fail(report, format!("sample {s}, order 3 reversal: {lhs3} vs {rev3}"));
        }

        let lhs4 = tr(&[a, b, cm, dm])?;
        let rhs4 = trace_formula_rhs(g, c, d, &qs, 4)?;
        report.order4_checked += 1;
        if lhs4 != rhs4 {
            fail(report, format!("sample {s}, order 4: {lhs4} ≠ {rhs4}"));
        }
        let rev4 = tr(&[dm, cm, b, a])?;
        report.reversal_checked += 1;
        if rev4 != lhs4 {
            fail(report, format!("sample {s}, order 4 reversal: {lhs4} vs {rev4}"));
        }
        let cyc4 = tr(&[b, cm, dm, a])?;
        report.cyclic_checked += 1;
        if cyc4 != lhs4 {
            fail(report, format!("sample {s}, order 4 cyclic: {lhs4} vs {cyc4}"));
        }

        let cube = tr(&[a, a, a])?;
        let fifth = tr(&[a, a, a, a, a])?;
        report.odd_vanishing_checked += 2;
        if !cube.is_zero() || !fifth.is_zero() {
            fail(report, format!("sample {s}: odd power traces {cube}, {fifth}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(t: TypeLabel) -> LieAlgebraData {
        lie_algebra(t).unwrap()
    }

    #[test]
    fn sl2_basis() {
        let g = alg(TypeLabel::A(1));
        assert_eq!(g.basis, vec!["e", "h", "f"]);
        assert_eq!(g.basis_bracket(0, 2), &[(1, 1)]);
        assert_eq!(g.basis_bracket(1, 0), &[(0, 2)]);
        assert_eq!(g.basis_bracket(1, 2), &[(2, -2)]);
        assert_eq!(g.basis_form(0, 2), qi(1));
        assert_eq!(g.basis_form(1, 1), qi(2));
        assert_eq!(g.central_charge_level1, qi(1));
    }

    #[test]
    fn sl2_traces() {
        let g = alg(TypeLabel::A(1));
        let h = g.basis_vector(1);
        assert_eq!(g.trace_ad_product(&[h.clone(), h.clone()]).unwrap(), qi(8));
        assert_eq!(g.trace_ad_product(&[h.clone(), h.clone(), h.clone()]).unwrap(), qi(0));
        let four = vec![h.clone(); 4];
        assert_eq!(g.trace_ad_product(&four).unwrap(), qi(32));
        assert_eq!(trace_formula_rhs(&g, &qi(1), &qi(3), &four, 4).unwrap(), qi(32));
        assert_eq!(trace_formula_rhs(&g, &qi(1), &qi(3), &four[..2], 2).unwrap(), qi(8));
        assert_eq!(quartic_coefficients(&qi(1), &qi(3)).unwrap(), [q(2, 3), q(-2, 3), q(8, 3)]);
    }

    #[test]
    fn excluded_central_charges() {
        let g = alg(TypeLabel::A(1));
        let h = g.basis_vector(1);
        let four = vec![h; 4];
        assert!(matches!(
            trace_formula_rhs(&g, &q(-22, 5), &qi(3), &four, 4),
            Err(Error::ExcludedCentralCharge { .. })
        ));
        assert!(matches!(
            trace_formula_rhs(&g, &qi(0), &qi(3), &four[..2], 2),
            Err(Error::ExcludedCentralCharge { .. })
        ));
        assert!(matches!(trace_formula_rhs(&g, &qi(1), &qi(3), &four, 5), Err(Error::UnsupportedOrder(5))));
        assert!(matches!(
            g.trace_ad_product(&[vec![qi(1); 2]]),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn jacobi_and_invariance_small_types() {
        for t in [TypeLabel::A(1), TypeLabel::A(2), TypeLabel::B(2), TypeLabel::G2, TypeLabel::C(3), TypeLabel::D(4)] {
            let g = alg(t);
            assert_eq!(g.dim, t.dimension());
            assert_eq!(g.check_jacobi(), None, "{t}");
            assert_eq!(g.check_invariance(), None, "{t}");
            assert!(g.killing_check().passed, "{t}");
        }
    }

    #[test]
    fn dimensions_and_central_charges() {
        let g2 = alg(TypeLabel::G2);
        assert_eq!((g2.dim, g2.dual_coxeter), (14, 4));
        assert_eq!(g2.central_charge_level1, q(14, 5));
        let e8 = alg(TypeLabel::E8);
        assert_eq!((e8.dim, e8.dual_coxeter), (248, 30));
        assert_eq!(e8.central_charge_level1, qi(8));
    }

    #[test]
    fn dual_basis_pairs_to_identity() {
        for t in [TypeLabel::A(2), TypeLabel::G2] {
            let g = alg(t);
            let dual = g.dual_basis();
            for (j, x) in dual.iter().enumerate() {
                for k in 0..g.dim {
                    let v = g.form(x, &g.basis_vector(k)).unwrap();
                    assert_eq!(v, if j == k { qi(1) } else { qi(0) });
                }
            }
        }
    }

    #[test]
    fn sparse_and_dense_traces_agree() {
        let g = alg(TypeLabel::G2);
        let tuples = [[0, 13, 5, 7], [3, 3, 10, 12], [6, 7, 8, 1]];
        for t in tuples {
            let args: Vec<Vec<Q>> = t.iter().map(|&i| g.basis_vector(i)).collect();
            assert_eq!(g.trace_ad_product(&args).unwrap(), qi(g.trace_basis_product(&t)));
            assert_eq!(g.trace_ad_product_exact(&args).unwrap(), qi(g.trace_basis_product(&t)));
        }
    }

    #[test]
    fn rational_arguments_are_rescaled() {
        let g = alg(TypeLabel::A(2));
        let x: Vec<Q> = (0..8).map(|i| q(i as i64 - 3, 2 + i as i64 % 3)).collect();
        let y: Vec<Q> = (0..8).map(|i| q(1, 1 + i as i64)).collect();
        let args = vec![x.clone(), y.clone(), x, y];
        assert_eq!(g.trace_ad_product(&args).unwrap(), g.trace_ad_product_exact(&args).unwrap());
    }

    #[test]
    fn exhaustive_a1() {
        let g = alg(TypeLabel::A(1));
        let report = verify_trace_formulas(&g, &TraceCheckConfig::default_for(&g)).unwrap();
        assert!(report.passed, "{:?}", report.counterexample);
        assert_eq!(report.order4_checked, 81);
    }

    #[test]
    fn sampled_d4() {
        let g = alg(TypeLabel::D(4));
        let cfg = TraceCheckConfig { exhaustive: false, samples: 3, seed: 7 };
        let report = verify_trace_formulas(&g, &cfg).unwrap();
        assert!(report.passed, "{:?}", report.counterexample);
    }

    #[test]
    fn ad_is_a_homomorphism() {
        let g = alg(TypeLabel::G2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let to_q = |v: Vec<i64>| v.into_iter().map(qi).collect::<Vec<Q>>();
        let x = to_q(random_element(&g, &mut rng));
        let y = to_q(random_element(&g, &mut rng));
        let lhs = g.ad_matrix(&g.bracket(&x, &y).unwrap()).unwrap();
        let ax = g.ad_matrix(&x).unwrap();
        let ay = g.ad_matrix(&y).unwrap();
        let xy = ax.mul(&ay);
        let yx = ay.mul(&ax);
        for i in 0..g.dim {
            for j in 0..g.dim {
                assert_eq!(lhs[(i, j)], &xy[(i, j)] - &yx[(i, j)]);
            }
        }
    }
}
