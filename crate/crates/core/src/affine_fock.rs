//! The universal level-one affine vertex algebra of a simple Lie algebra in the
//! PBW basis `x_(-n_1)…x_(-n_k)𝟙`, with `[x_(m), y_(n)] = [x,y]_(m+n) + m(x|y)δ_{m+n,0}`.
//!
//! The contravariant form uses `x_(n)† = -x_(-n)` and `(𝟙|𝟙) = -1`, so that the
//! degree-one Gram matrix is the normalized form `φ`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_algebra::{random_element, trace_formula_rhs, LieAlgebraData};
use crate::linalg::Matrix;
use crate::rational::{fmt_q, q, qi, ser, Q};
use crate::virasoro::{descendant_zero_mode_trace_on_primaries, x4_y4, VirasoroModule, VirasoroState};

/// Sign in `x_(n)† = σ x_(-n)`.
pub const ADJOINT_SIGN: i64 = -1;
/// `(𝟙|𝟙)`.
pub const VACUUM_NORM: i64 = -1;
/// Largest PBW basis accepted by [`AffineModule::gram`].
pub const GRAM_BASIS_CAP: usize = 2000;

/// `(n, b)` stands for `b_(-n)` with `n ≥ 1`.
pub type Mode = (i64, usize);
/// Modes in canonical order: `n` decreasing, ties by increasing basis index.
pub type FockMonomial = Vec<Mode>;

type Terms = BTreeMap<FockMonomial, Q>;

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

/// `a` may stand to the left of `b` in a canonical monomial.
fn precedes(a: Mode, b: Mode) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 <= b.1)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockState {
    terms: Terms,
}

impl FockState {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::monomial(Vec::new(), Q::one())
    }

    /// A canonical monomial times `coeff`.
    pub fn monomial(modes: FockMonomial, coeff: Q) -> Self {
        let mut terms = Terms::new();
        if !coeff.is_zero() {
            terms.insert(modes, coeff);
        }
        FockState { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &FockMonomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|m| m.iter().map(|x| x.0).sum::<i64>() as usize);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        add_into(&mut terms, &other.terms, &Q::one());
        FockState { terms }
    }

    pub fn scale(&self, k: &Q) -> Self {
        let mut terms = Terms::new();
        add_into(&mut terms, &self.terms, k);
        FockState { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn render(&self, g: &LieAlgebraData) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let modes: String = m.iter().map(|(n, b)| format!("{}(-{n})", g.basis[*b])).collect();
                format!("({}){}1", fmt_q(c), modes)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub struct AffineModule<'g> {
    pub g: &'g LieAlgebraData,
    /// `x_j` with `φ(b_i, x_j) = δ_ij`.
    dual: Vec<Vec<Q>>,
    omega: FockState,
    mode_memo: RefCell<HashMap<(usize, i64, FockMonomial), Terms>>,
    vir_memo: RefCell<HashMap<(i64, FockMonomial), Terms>>,
}

impl<'g> AffineModule<'g> {
    pub fn new(g: &'g LieAlgebraData) -> Self {
        let dual = g.dual_basis();
        let mut module = AffineModule {
            g,
            dual,
            omega: FockState::zero(),
            mode_memo: RefCell::new(HashMap::new()),
            vir_memo: RefCell::new(HashMap::new()),
        };
        // ω = κ₂ / (2(1+h∨)).
        let k2 = module.casimir_state(2);
        module.omega = k2.scale(&q(1, 2 * (1 + g.dual_coxeter as i64)));
        module
    }

    pub fn central_charge(&self) -> &Q {
        &self.g.central_charge_level1
    }

    pub fn dim(&self) -> Q {
        qi(self.g.dim as i64)
    }

    fn basis_mode_monomial(&self, b: usize, m: i64, mono: &[Mode]) -> Terms {
        let key = (b, m, mono.to_vec());
        if let Some(t) = self.mode_memo.borrow().get(&key) {
            return t.clone();
        }
        let out = self.basis_mode_uncached(b, m, mono);
        self.mode_memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn basis_mode_uncached(&self, b: usize, m: i64, mono: &[Mode]) -> Terms {
        let mut out = Terms::new();
        let Some((&(n1, b1), rest)) = mono.split_first() else {
            if m < 0 {
                out.insert(vec![(-m, b)], Q::one());
            }
            return out;
        };
        if m < 0 && precedes((-m, b), (n1, b1)) {
            let mut p = Vec::with_capacity(mono.len() + 1);
            p.push((-m, b));
            p.extend_from_slice(mono);
            out.insert(p, Q::one());
            return out;
        }
        // x_(m) y_(-n1) = y_(-n1) x_(m) + [x,y]_(m-n1) + m(x|y)δ_{m,n1}.
        let inner = self.basis_mode_monomial(b, m, rest);
        add_into(&mut out, &self.basis_mode_terms(b1, -n1, &inner), &Q::one());
        for &(k, c) in self.g.basis_bracket(b, b1) {
            add_into(&mut out, &self.basis_mode_monomial(k, m - n1, rest), &qi(c));
        }
        if m == n1 {
            let pairing = qi(m) * self.g.basis_form(b, b1);
            let single: Terms = [(rest.to_vec(), Q::one())].into();
            add_into(&mut out, &single, &pairing);
        }
        out
    }

    fn basis_mode_terms(&self, b: usize, m: i64, terms: &Terms) -> Terms {
        let mut out = Terms::new();
        for (mono, c) in terms {
            add_into(&mut out, &self.basis_mode_monomial(b, m, mono), c);
        }
        out
    }

    pub fn apply_basis_mode(&self, b: usize, m: i64, state: &FockState) -> FockState {
        FockState { terms: self.basis_mode_terms(b, m, &state.terms) }
    }

    /// `x_(m)` for an element `x` given in basis coordinates.
    pub fn apply_mode(&self, x: &[Q], m: i64, state: &FockState) -> FockState {
        let mut out = Terms::new();
        for (b, xb) in x.iter().enumerate() {
            if !xb.is_zero() {
                add_into(&mut out, &self.basis_mode_terms(b, m, &state.terms), xb);
            }
        }
        FockState { terms: out }
    }

    /// `x_(-1)𝟙`.
    pub fn weight_one(&self, x: &[Q]) -> FockState {
        self.apply_mode(x, -1, &FockState::vacuum())
    }

    pub fn omega(&self) -> &FockState {
        &self.omega
    }

    fn virasoro_monomial(&self, m: i64, mono: &[Mode]) -> Terms {
        let key = (m, mono.to_vec());
        if let Some(t) = self.vir_memo.borrow().get(&key) {
            return t.clone();
        }
        let mut out = Terms::new();
        match mono.split_first() {
            None => {
                if m <= -2 {
                    // L(-n)𝟙 = T^{n-2}ω/(n-2)!.
                    let mut s = self.omega.terms.clone();
                    let mut fact = Q::one();
                    for k in 1..=(-m - 2) {
                        s = self.virasoro_terms(-1, &s);
                        fact *= qi(k);
                    }
                    add_into(&mut out, &s, &fact.recip());
                }
            }
            Some((&(n1, b1), rest)) => {
                // [L(m), a_(-n)] = n a_(m-n) for weight-one primaries.
                let inner = self.virasoro_monomial(m, rest);
                add_into(&mut out, &self.basis_mode_terms(b1, -n1, &inner), &Q::one());
                add_into(&mut out, &self.basis_mode_monomial(b1, m - n1, rest), &qi(n1));
            }
        }
        self.vir_memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn virasoro_terms(&self, m: i64, terms: &Terms) -> Terms {
        let mut out = Terms::new();
        for (mono, c) in terms {
            add_into(&mut out, &self.virasoro_monomial(m, mono), c);
        }
        out
    }

    /// `L(m)` from the primary commutation rule.
    pub fn apply_virasoro(&self, m: i64, state: &FockState) -> FockState {
        FockState { terms: self.virasoro_terms(m, &state.terms) }
    }

    /// `L(m) = 1/(2(1+h∨)) Σ_j Σ_p :b_j(p) x_j(m-p):`, expanded mode by mode.
    pub fn sugawara_virasoro(&self, m: i64, state: &FockState) -> Result<FockState> {
        let deg =
            state.degree().ok_or_else(|| Error::InvalidArgument("Sugawara modes need a homogeneous state".into()))?
                as i64;
        let mut out = FockState::zero();
        for j in 0..self.g.dim {
            let bj = self.g.basis_vector(j);
            for p in (m - deg - 1)..=(deg + 1) {
                let term = if p < 0 {
                    self.apply_mode(&bj, p, &self.apply_mode(&self.dual[j], m - p, state))
                } else {
                    self.apply_mode(&self.dual[j], m - p, &self.apply_mode(&bj, p, state))
                };
                out = out.add(&term);
            }
        }
        Ok(out.scale(&(qi(1) / qi(2 * (1 + self.g.dual_coxeter as i64)))))
    }

    /// `κ_i = Σ_j b_j(1-i) x_j(-1)𝟙`.
    pub fn casimir_state(&self, i: i64) -> FockState {
        let mut out = FockState::zero();
        for j in 0..self.g.dim {
            let inner = self.weight_one(&self.dual[j]);
            out = out.add(&self.apply_basis_mode(j, 1 - i, &inner));
        }
        out
    }

    /// `κ_i` from the basis `x^j = Σ_k rows[j][k] b_k` and its dual.
    pub fn casimir_state_in_basis(&self, i: i64, rows: &Matrix) -> Result<FockState> {
        let phi = self.g.form_matrix();
        let inv = rows.mul(&phi).inverse().ok_or_else(|| Error::InvalidArgument("basis change is singular".into()))?;
        // Rows of (MΦ)^{-T} give the dual vectors.
        let dual = inv.transpose();
        let mut out = FockState::zero();
        for j in 0..self.g.dim {
            let xj: Vec<Q> = dual.row(j).to_vec();
            let upper: Vec<Q> = rows.row(j).to_vec();
            out = out.add(&self.apply_mode(&upper, 1 - i, &self.weight_one(&xj)));
        }
        Ok(out)
    }

    /// Canonical PBW monomials of the given degree.
    pub fn pbw_basis(&self, degree: usize) -> Vec<FockMonomial> {
        fn go(dim: usize, left: i64, last: Option<Mode>, cur: &mut FockMonomial, out: &mut Vec<FockMonomial>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            let top = last.map_or(left, |l| l.0.min(left));
            for n in (1..=top).rev() {
                for b in 0..dim {
                    if let Some(l) = last {
                        if !precedes(l, (n, b)) {
                            continue;
                        }
                    }
                    cur.push((n, b));
                    go(dim, left - n, Some((n, b)), cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self.g.dim, degree as i64, None, &mut Vec::new(), &mut out);
        out
    }

    /// `(u | v)` for a canonical monomial `u`.
    pub fn pairing(&self, u: &[Mode], v: &FockState) -> Q {
        let mut terms = v.terms.clone();
        for &(n, b) in u {
            terms = self.basis_mode_terms(b, n, &terms);
        }
        let sign = if u.len().is_multiple_of(2) { qi(VACUUM_NORM) } else { qi(VACUUM_NORM * ADJOINT_SIGN) };
        terms.get(&Vec::new()).map_or_else(Q::zero, |c| c * sign)
    }

    pub fn gram(&self, degree: usize) -> Result<Matrix> {
        let basis = self.pbw_basis(degree);
        if basis.len() > GRAM_BASIS_CAP {
            return Err(Error::CapExceeded {
                what: format!("degree-{degree} PBW basis of size {}", basis.len()),
                cap: GRAM_BASIS_CAP,
            });
        }
        let rows = basis
            .iter()
            .map(|u| basis.iter().map(|v| self.pairing(u, &FockState::monomial(v.clone(), Q::one()))).collect())
            .collect();
        Ok(Matrix::from_rows(rows))
    }

    pub fn radical_membership(&self, state: &FockState) -> Result<RadicalCertificate> {
        if state.is_zero() {
            return Ok(RadicalCertificate { degree: 0, basis_size: 0, in_radical: true, residual: Vec::new() });
        }
        let degree = state
            .degree()
            .ok_or_else(|| Error::InvalidArgument("radical membership needs a homogeneous state".into()))?;
        let basis = self.pbw_basis(degree);
        let gram = self.gram(degree)?;
        let coords: Vec<Q> = basis.iter().map(|m| state.coefficient(m)).collect();
        let residual = gram.mul_vec(&coords);
        let in_radical = residual.iter().all(Zero::is_zero);
        Ok(RadicalCertificate { degree, basis_size: basis.len(), in_radical, residual })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RadicalCertificate {
    pub degree: usize,
    pub basis_size: usize,
    pub in_radical: bool,
    /// `Gram · coordinates`.
    #[serde(serialize_with = "ser::vec")]
    pub residual: Vec<Q>,
}

pub fn affine_gram(g: &LieAlgebraData, degree: usize) -> Result<Matrix> {
    AffineModule::new(g).gram(degree)
}

pub fn casimir_state(g: &LieAlgebraData, i: i64) -> FockState {
    AffineModule::new(g).casimir_state(i)
}

pub fn radical_membership(g: &LieAlgebraData, state: &FockState) -> Result<RadicalCertificate> {
    AffineModule::new(g).radical_membership(state)
}

#[derive(Clone, Debug, Serialize)]
pub struct CasimirIdentities {
    pub kappa1_zero: bool,
    /// `κ₂ = (2d/c)ω`.
    pub kappa2: bool,
    /// `Tκ₂ = 2κ₃` and `κ₃ = (d/c)Tω`.
    pub kappa3: bool,
    pub degree4_basis_size: usize,
    pub kappa4: RadicalCertificate,
    pub degree1_gram_is_form: bool,
    pub degree1_radical_zero: bool,
}

/// `κ₁ = 0`, `κ₂ = (2d/c)ω`, `κ₃ = (d/c)Tω` exactly and
/// `κ₄ - (X₄T²ω + Y₄ω_(-1)ω)` in the degree-4 radical.
pub fn casimir_identities(g: &LieAlgebraData) -> Result<CasimirIdentities> {
    let m = AffineModule::new(g);
    let c = m.central_charge().clone();
    let d = m.dim();
    let omega = m.omega().clone();
    let kappa1_zero = m.casimir_state(1).is_zero();
    let kappa2 = m.casimir_state(2) == omega.scale(&(qi(2) * &d / &c));
    let k3 = m.casimir_state(3);
    let t_omega = m.apply_virasoro(-1, &omega);
    let kappa3 = m.apply_virasoro(-1, &m.casimir_state(2)) == k3.scale(&qi(2)) && k3 == t_omega.scale(&(&d / &c));
    let (x4, y4) = x4_y4(&c, &d);
    let t2_omega = m.apply_virasoro(-1, &t_omega);
    let omega_omega = m.apply_virasoro(-2, &omega);
    let defect = m.casimir_state(4).sub(&t2_omega.scale(&x4).add(&omega_omega.scale(&y4)));
    let kappa4 = m.radical_membership(&defect)?;
    let gram1 = m.gram(1)?;
    let degree1_gram_is_form = gram1 == g.form_matrix();
    let degree1_radical_zero = !gram1.determinant().is_zero();
    Ok(CasimirIdentities {
        kappa1_zero,
        kappa2,
        kappa3,
        degree4_basis_size: m.pbw_basis(4).len(),
        kappa4,
        degree1_gram_is_form,
        degree1_radical_zero,
    })
}

fn random_q_vector(g: &LieAlgebraData, rng: &mut ChaCha8Rng) -> Vec<Q> {
    random_element(g, rng).into_iter().map(qi).collect()
}

/// A random combination of up to three PBW monomials of degree at most `max_degree`.
pub fn random_state(module: &AffineModule<'_>, rng: &mut ChaCha8Rng, max_degree: usize) -> FockState {
    let degree = rng.gen_range(0..=max_degree);
    let basis = module.pbw_basis(degree);
    let mut s = FockState::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let m = basis[rng.gen_range(0..basis.len())].clone();
        s = s.add(&FockState::monomial(m, qi(rng.gen_range(-3..=3))));
    }
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaA1Report {
    pub type_label: String,
    pub samples: usize,
    pub seed: u64,
    pub passed: usize,
    pub first_failure: Option<String>,
}

/// `x_(q)a_(0) = (a_(1)x)_(q-1) + x_(q-1)a_(1) + a_(0)x_(q) - a_(1)x_(q-1)` on sampled states.
pub fn verify_lemma_a1(g: &LieAlgebraData, samples: usize, seed: u64) -> LemmaA1Report {
    let module = AffineModule::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut first_failure = None;
    for _ in 0..samples {
        let x = random_q_vector(g, &mut rng);
        let a = random_q_vector(g, &mut rng);
        let qq: i64 = rng.gen_range(-2..=2);
        let s = random_state(&module, &mut rng, 3);
        let lhs = module.apply_mode(&x, qq, &module.apply_mode(&a, 0, &s));
        // a_(1)x = (a|x)𝟙 and 𝟙_(n) = δ_{n,-1}.
        let ax = g.form(&a, &x).expect("matching dimensions");
        let first = if qq == 0 { s.scale(&ax) } else { FockState::zero() };
        let rhs = first
            .add(&module.apply_mode(&x, qq - 1, &module.apply_mode(&a, 1, &s)))
            .add(&module.apply_mode(&a, 0, &module.apply_mode(&x, qq, &s)))
            .sub(&module.apply_mode(&a, 1, &module.apply_mode(&x, qq - 1, &s)));
        if lhs == rhs {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = Some(format!("q = {qq}, state = {}", s.render(g)));
        }
    }
    LemmaA1Report { type_label: g.type_label.to_string(), samples, seed, passed, first_failure }
}

/// `([a1,a2]|[a3,a4])`, `([a1,a4]|[a2,a3])` and the symmetric form product.
pub fn pqs(g: &LieAlgebraData, a: &[Vec<Q>; 4]) -> Result<(Q, Q, Q)> {
    let p = g.form(&g.bracket(&a[0], &a[1])?, &g.bracket(&a[2], &a[3])?)?;
    let qq = g.form(&g.bracket(&a[0], &a[3])?, &g.bracket(&a[1], &a[2])?)?;
    let s = g.form(&a[0], &a[1])? * g.form(&a[2], &a[3])?
        + g.form(&a[0], &a[2])? * g.form(&a[1], &a[3])?
        + g.form(&a[0], &a[3])? * g.form(&a[1], &a[2])?;
    Ok((p, qq, s))
}

/// Closed forms for the projection of `a1_(-1)a2_(-1)a3_(-1)a4` onto `V_ω⁴`.
pub fn projection_closed_form(c: &Q, p: &Q, qq: &Q, s: &Q) -> (Q, Q) {
    let den = c * (qi(5) * c + qi(22));
    let z1 = ((c + qi(14)) * p + qi(12) * qq - qi(12) * s) / &den;
    let z2 = (qi(-16) * p - qi(20) * qq + qi(20) * s) / &den;
    (z1, z2)
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixB {
    #[serde(serialize_with = "ser::q")]
    pub p: Q,
    #[serde(serialize_with = "ser::q")]
    pub q: Q,
    #[serde(serialize_with = "ser::q")]
    pub s: Q,
    #[serde(serialize_with = "ser::q")]
    pub z1: Q,
    #[serde(serialize_with = "ser::q")]
    pub z2: Q,
    #[serde(serialize_with = "ser::q")]
    pub z1_closed: Q,
    #[serde(serialize_with = "ser::q")]
    pub z2_closed: Q,
    pub matches: bool,
}

fn quartic_state(module: &AffineModule<'_>, a: &[Vec<Q>; 4]) -> FockState {
    let mut v = module.weight_one(&a[3]);
    for x in a[..3].iter().rev() {
        v = module.apply_mode(x, -1, &v);
    }
    v
}

/// Solves for `π(v) = Z₁L(-4)𝟙 + Z₂L(-2)²𝟙` from `(L(-4)𝟙|v)` and `(L(-2)²𝟙|v)`.
pub fn appendix_b_projection(g: &LieAlgebraData, a: &[Vec<Q>; 4]) -> Result<AppendixB> {
    let module = AffineModule::new(g);
    appendix_b_with(&module, a)
}

fn appendix_b_with(module: &AffineModule<'_>, a: &[Vec<Q>; 4]) -> Result<AppendixB> {
    let g = module.g;
    let c = module.central_charge().clone();
    let vir = VirasoroModule::vacuum(&c);
    let mut gram = vir.gram(4);
    if gram.determinant().is_zero() {
        return Err(Error::SingularVirasoro {
            degree: 4,
            c: c.clone(),
            degenerate: crate::classification::degenerate_central_charges_up_to(4)
                .iter()
                .map(fmt_q)
                .collect::<Vec<_>>()
                .join(", "),
        });
    }
    let vac = qi(VACUUM_NORM);
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            gram[(i, j)] = &gram[(i, j)] * &vac;
        }
    }
    let v = quartic_state(module, a);
    let vacuum_coeff = |s: &FockState| s.coefficient(&Vec::new()) * &vac;
    // Basis order L(-4)𝟙, L(-2)²𝟙.
    let b4 = vacuum_coeff(&module.apply_virasoro(4, &v));
    let b22 = vacuum_coeff(&module.apply_virasoro(2, &module.apply_virasoro(2, &v)));
    let z = gram.solve_unique(&[b4, b22])?;
    let (p, qq, s) = pqs(g, a)?;
    let (z1_closed, z2_closed) = projection_closed_form(&c, &p, &qq, &s);
    let matches = z[0] == z1_closed && z[1] == z2_closed;
    Ok(AppendixB { p, q: qq, s, z1: z[0].clone(), z2: z[1].clone(), z1_closed, z2_closed, matches })
}

/// Mode `v_(n)` of `v = a_1(-1)…a_{k-1}(-1)a_k` through the iterate formula
/// `(a_(-1)b)_(n) = Σ_{j≥0} (a_(-1-j)b_(n+j) + b_(n-1-j)a_(j))`.
fn chain_mode(module: &AffineModule<'_>, chain: &[Vec<Q>], n: i64, s: &FockState) -> FockState {
    let Some((a, rest)) = chain.split_first() else {
        return if n == -1 { s.clone() } else { FockState::zero() };
    };
    if rest.is_empty() {
        return module.apply_mode(a, n, s);
    }
    let Some(deg) = s.degree() else {
        return s.terms().fold(FockState::zero(), |acc, (m, c)| {
            acc.add(&chain_mode(module, chain, n, &FockState::monomial(m.clone(), c.clone())))
        });
    };
    let deg = deg as i64;
    let wb = rest.len() as i64;
    let mut out = FockState::zero();
    for j in 0..=(deg + wb - n).max(deg).max(0) {
        let inner = chain_mode(module, rest, n + j, s);
        if !inner.is_zero() {
            out = out.add(&module.apply_mode(a, -1 - j, &inner));
        }
        let aj = module.apply_mode(a, j, s);
        if !aj.is_zero() {
            out = out.add(&chain_mode(module, rest, n - 1 - j, &aj));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceDecomposition {
    /// `Tr ad a1 ad a2 ad a3 ad a4`.
    #[serde(serialize_with = "ser::q")]
    pub trace_ad: Q,
    /// `Tr_{V¹} a1_(0)a2_(0)a3_(0)a4_(0)` in the module.
    #[serde(serialize_with = "ser::q")]
    pub trace_zero_modes: Q,
    /// `Tr_{V¹} (a1_(-1)a2_(-1)a3_(-1)a4)_(3)`.
    #[serde(serialize_with = "ser::q")]
    pub trace_v3: Q,
    #[serde(serialize_with = "ser::q")]
    pub p: Q,
    #[serde(serialize_with = "ser::q")]
    pub q: Q,
    /// `Tr ad… = Tr v_(3) + P + 2Q`.
    pub cd1: bool,
    /// `Tr v_(3) = Tr π(v)_(3)` with `π(v)` from the projection.
    #[serde(serialize_with = "ser::q")]
    pub trace_projection: Q,
    pub design: bool,
    /// Quartic trace identity through the recombination.
    pub recombined: bool,
}

pub fn trace_decomposition_check(g: &LieAlgebraData, a: &[Vec<Q>; 4]) -> Result<TraceDecomposition> {
    let module = AffineModule::new(g);
    trace_decomposition_with(&module, a)
}

fn trace_decomposition_with(module: &AffineModule<'_>, a: &[Vec<Q>; 4]) -> Result<TraceDecomposition> {
    let g = module.g;
    let trace_ad = g.trace_ad_product(a)?;
    let mut trace_v3 = Q::zero();
    let mut trace_zero_modes = Q::zero();
    for i in 0..g.dim {
        let s = FockState::monomial(vec![(1, i)], Q::one());
        trace_v3 += chain_mode(module, a, 3, &s).coefficient(&vec![(1, i)]);
        let mut t = s.clone();
        for x in a.iter().rev() {
            t = module.apply_mode(x, 0, &t);
        }
        trace_zero_modes += t.coefficient(&vec![(1, i)]);
    }
    let (p, qq, _) = pqs(g, a)?;
    let cd1 = trace_ad == trace_zero_modes && trace_ad == &trace_v3 + &p + qi(2) * &qq;
    let proj = appendix_b_with(module, a)?;
    let c = module.central_charge().clone();
    let d = module.dim();
    let pi_v =
        VirasoroState::monomial(&c, &[4], proj.z1.clone()).add(&VirasoroState::monomial(&c, &[2, 2], proj.z2.clone()));
    let trace_projection = descendant_zero_mode_trace_on_primaries(&pi_v, &d)?;
    let design = trace_projection == trace_v3;
    let recombined = &trace_projection + &p + qi(2) * &qq == trace_formula_rhs(g, &c, &d, a, 4)?;
    Ok(TraceDecomposition { trace_ad, trace_zero_modes, trace_v3, p, q: qq, cd1, trace_projection, design, recombined })
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixBSweep {
    pub type_label: String,
    pub seed: u64,
    pub samples: usize,
    pub projection_matches: usize,
    pub cd1_balanced: usize,
    pub design_holds: usize,
    pub recombined: usize,
}

/// Seeded random quadruples through both the projection and the trace decomposition.
pub fn appendix_b_sweep(g: &LieAlgebraData, samples: usize, seed: u64) -> Result<AppendixBSweep> {
    let module = AffineModule::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sweep = AppendixBSweep {
        type_label: g.type_label.to_string(),
        seed,
        samples,
        projection_matches: 0,
        cd1_balanced: 0,
        design_holds: 0,
        recombined: 0,
    };
    for _ in 0..samples {
        let a = [0, 1, 2, 3].map(|_| random_q_vector(g, &mut rng));
        let t = trace_decomposition_with(&module, &a)?;
        let b = appendix_b_with(&module, &a)?;
        sweep.projection_matches += usize::from(b.matches);
        sweep.cd1_balanced += usize::from(t.cd1);
        sweep.design_holds += usize::from(t.design);
        sweep.recombined += usize::from(t.recombined);
    }
    Ok(sweep)
}

/// `(e, f, e, f)` in `A1` with basis order `e, h, f`.
pub fn a1_efef(g: &LieAlgebraData) -> [Vec<Q>; 4] {
    let e = g.basis_vector(0);
    let f = g.basis_vector(2);
    [e.clone(), f.clone(), e, f]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::lie_algebra;
    use crate::root_system::TypeLabel;

    fn a1() -> LieAlgebraData {
        lie_algebra(TypeLabel::A(1)).unwrap()
    }

    #[test]
    fn basic_modes() {
        let g = a1();
        let m = AffineModule::new(&g);
        let f1 = FockState::monomial(vec![(1, 2)], Q::one());
        assert_eq!(m.apply_basis_mode(0, 1, &f1), FockState::vacuum());
        let e1 = FockState::monomial(vec![(1, 0)], Q::one());
        assert_eq!(m.apply_basis_mode(1, 0, &e1), e1.scale(&qi(2)));
        for x in 0..3 {
            for y in 0..3 {
                let s = FockState::monomial(vec![(1, y)], Q::one());
                assert!(m.apply_basis_mode(x, 2, &s).is_zero());
            }
        }
    }

    #[test]
    fn pbw_count_a1() {
        let g = a1();
        let m = AffineModule::new(&g);
        let counts: Vec<usize> = (0..=4).map(|d| m.pbw_basis(d).len()).collect();
        assert_eq!(counts, vec![1, 3, 9, 22, 51]);
    }

    #[test]
    fn degree_one_gram_is_form() {
        let g = a1();
        assert_eq!(affine_gram(&g, 1).unwrap(), g.form_matrix());
    }

    #[test]
    fn level_one_singular_vector() {
        let g = a1();
        let s = FockState::monomial(vec![(1, 0), (1, 0)], Q::one());
        assert!(radical_membership(&g, &s).unwrap().in_radical);
        let m = AffineModule::new(&g);
        let r = m.radical_membership(m.omega()).unwrap();
        assert!(!r.in_radical);
    }

    #[test]
    fn omega_norm() {
        let g = a1();
        let m = AffineModule::new(&g);
        let l2 = m.apply_virasoro(2, m.omega());
        // L(2)ω = (c/2)𝟙 with c = 1.
        assert_eq!(l2, FockState::vacuum().scale(&q(1, 2)));
    }

    #[test]
    fn casimir_identities_a1() {
        let g = a1();
        let r = casimir_identities(&g).unwrap();
        assert!(r.kappa1_zero && r.kappa2 && r.kappa3);
        assert_eq!(r.degree4_basis_size, 51);
        assert!(r.kappa4.in_radical);
        assert!(r.degree1_gram_is_form && r.degree1_radical_zero);
    }

    #[test]
    fn sugawara_agrees_with_primary_rule() {
        let g = a1();
        let m = AffineModule::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let s = random_state(&m, &mut rng, 2);
            let Some(_) = s.degree() else { continue };
            for k in -2..=3 {
                assert_eq!(m.sugawara_virasoro(k, &s).unwrap(), m.apply_virasoro(k, &s), "L({k})");
            }
        }
    }

    #[test]
    fn virasoro_gram_embeds() {
        let g = a1();
        let m = AffineModule::new(&g);
        let c = m.central_charge().clone();
        let l4 = m.apply_virasoro(-4, &FockState::vacuum());
        let l22 = m.apply_virasoro(-2, m.omega());
        let vir = VirasoroModule::vacuum(&c).gram(4);
        let pair =
            |u: &FockState, v: &FockState| -> Q { u.terms().map(|(mono, coeff)| coeff * m.pairing(mono, v)).sum() };
        let states = [l4, l22];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(pair(&states[i], &states[j]), -vir[(i, j)].clone());
            }
        }
    }

    #[test]
    fn efef_projection() {
        let g = a1();
        let b = appendix_b_projection(&g, &a1_efef(&g)).unwrap();
        assert_eq!((b.p.clone(), b.q.clone(), b.s.clone()), (qi(2), qi(-2), qi(2)));
        assert_eq!(b.z1, q(-2, 3));
        assert_eq!(b.z2, q(16, 9));
        assert!(b.matches);
        let zero = [0, 1, 2, 3].map(|_| vec![Q::zero(); 3]);
        let b = appendix_b_projection(&g, &zero).unwrap();
        assert!(b.z1.is_zero() && b.z2.is_zero());
    }

    #[test]
    fn efef_decomposition() {
        let g = a1();
        let t = trace_decomposition_check(&g, &a1_efef(&g)).unwrap();
        assert!(t.cd1 && t.design && t.recombined, "{t:?}");
    }

    #[test]
    fn lemma_a1_a1() {
        let g = a1();
        let r = verify_lemma_a1(&g, 40, 3);
        assert_eq!(r.passed, 40, "{:?}", r.first_failure);
    }

    #[test]
    fn lemma_2_3_and_invariance_a1() {
        let g = a1();
        let m = AffineModule::new(&g);
        let kappas: Vec<FockState> = (0..=4).map(|i| m.casimir_state(i)).collect();
        assert_eq!(kappas[0], FockState::vacuum().scale(&qi(3)));
        for i in 1..=4usize {
            for mm in 1..=i {
                let lhs = m.apply_virasoro(mm as i64, &kappas[i]);
                assert_eq!(lhs, kappas[i - mm].scale(&qi(i as i64 - 1)), "L({mm})κ_{i}");
            }
            for b in 0..3 {
                assert!(m.apply_basis_mode(b, 0, &kappas[i]).is_zero());
            }
        }
    }

    #[test]
    fn basis_independence() {
        let g = a1();
        let m = AffineModule::new(&g);
        let rows = Matrix::from_i64_rows(&[vec![2, 1, 0], vec![0, -1, 3], vec![1, 0, 1]]);
        for i in 0..=4 {
            assert_eq!(m.casimir_state_in_basis(i, &rows).unwrap(), m.casimir_state(i));
        }
    }
}
