//! Truncated q-series with rational exponents: eta products, level-one string
//! functions for `G2` and `F4`, graded dimensions of fixed-point subalgebras,
//! and the class-`S^n` degree read off from them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{fmt_q, q, qi, Q};
use crate::root_system::{
    bounded_census, build_root_system, enumerate_weyl_group, rho_displacement_census, Census, RootSystem, TypeLabel,
    DEFAULT_WEYL_CAP,
};

/// Default truncation order for printed expansions.
pub const DEFAULT_ORDER: i64 = 9;

/// Terms `coefficient · q^exponent` known for every exponent below `truncation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    terms: BTreeMap<Q, Q>,
    truncation: Q,
}

impl PuiseuxSeries {
    pub fn zero(truncation: Q) -> Self {
        PuiseuxSeries { terms: BTreeMap::new(), truncation }
    }

    pub fn one(truncation: Q) -> Self {
        Self::monomial(Q::one(), Q::zero(), truncation)
    }

    pub fn monomial(coeff: Q, exponent: Q, truncation: Q) -> Self {
        let mut s = Self::zero(truncation);
        s.insert(exponent, coeff);
        s
    }

    /// `Σ coeffs[i] q^i`, known below `truncation`.
    pub fn from_integer_coeffs(coeffs: &[i64], truncation: i64) -> Self {
        let mut s = Self::zero(qi(truncation));
        for (i, &c) in coeffs.iter().enumerate() {
            s.insert(qi(i as i64), qi(c));
        }
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Q, Q)>, truncation: Q) -> Self {
        let mut s = Self::zero(truncation);
        for (e, c) in terms {
            s.insert(e, c);
        }
        s
    }

    /// Adds `coeff · q^exponent`, dropping terms at or beyond the truncation.
    fn insert(&mut self, exponent: Q, coeff: Q) {
        if exponent >= self.truncation || coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent.clone()).or_insert_with(Q::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn truncation(&self) -> &Q {
        &self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Q, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &Q) -> Q {
        self.terms.get(exponent).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<&Q> {
        self.terms.keys().next()
    }

    /// Lower bound for the valuation: the truncation when no term is known.
    fn valuation_bound(&self) -> Q {
        self.valuation().cloned().unwrap_or_else(|| self.truncation.clone())
    }

    pub fn truncate(&self, truncation: &Q) -> Self {
        let t = truncation.min(&self.truncation).clone();
        Self::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), c.clone())), t)
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.truncation.clone().min(other.truncation.clone());
        let mut s = Self::zero(t);
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            s.insert(e.clone(), c.clone());
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero(self.truncation.clone());
        }
        Self::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), c * k)), self.truncation.clone())
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: &Q) -> Self {
        Self::from_terms(self.terms.iter().map(|(x, c)| (x + e, c.clone())), &self.truncation + e)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let t = (&self.truncation + other.valuation_bound()).min(&other.truncation + self.valuation_bound());
        let mut s = Self::zero(t);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e < s.truncation {
                    s.insert(e, ca * cb);
                }
            }
        }
        s
    }

    /// Multiplicative inverse. The result is known up to `T - 2v` where `v` is the valuation.
    pub fn invert(&self) -> Result<Self> {
        let v = self.valuation().cloned().ok_or(Error::SeriesInversion)?;
        let lead = self.coefficient(&v);
        // self = lead · q^v · (1 + r), r has only positive exponents.
        let unit = self.shift(&-v.clone()).scale(&lead.recip());
        let rel = unit.truncation.clone();
        let r = unit.sub(&Self::one(rel.clone()));
        let mut inv = Self::one(rel.clone());
        if let Some(eps) = r.valuation().cloned() {
            let neg_r = r.neg();
            let mut power = Self::one(rel.clone());
            let mut k = Q::one();
            while &k * &eps < rel {
                power = power.mul(&neg_r).truncate(&rel);
                inv = inv.add(&power);
                k += Q::one();
            }
        }
        Ok(inv.truncate(&rel).scale(&lead.recip()).shift(&-v))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.invert()?.pow(-n);
        }
        if n == 0 {
            return Ok(Self::one(&self.truncation - self.valuation_bound()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Substitutes `q -> q^factor`, multiplying every exponent and the truncation by `factor`.
    pub fn substitute_power(&self, factor: &Q) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::InvalidArgument(format!("exponent factor must be positive, got {factor}")));
        }
        Ok(Self::from_terms(self.terms.iter().map(|(e, c)| (e * factor, c.clone())), &self.truncation * factor))
    }

    /// `q -> q^{1/m}`.
    pub fn rescale_exponents(&self, m: i64) -> Result<Self> {
        if m <= 0 {
            return Err(Error::InvalidArgument(format!("rescale factor must be positive, got {m}")));
        }
        self.substitute_power(&q(1, m))
    }

    /// Integer coefficients `a_0..a_{k}` for all integer exponents below the truncation.
    pub fn integer_coefficients(&self) -> Result<Vec<Q>> {
        for e in self.terms.keys() {
            if !e.is_integer() {
                return Err(Error::ExponentIntegrality(e.clone()));
            }
        }
        let top = ceil_q(&self.truncation);
        Ok((0..top.max(0)).map(|n| self.coefficient(&qi(n))).collect())
    }
}

fn ceil_q(x: &Q) -> i64 {
    x.ceil().to_integer().to_i64().expect("small truncation")
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coeff = if mag.is_one() && !e.is_zero() { String::new() } else { fmt_q(&mag) };
            let power = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                "q".to_string()
            } else if e.is_integer() && e.is_positive() {
                format!("q^{e}")
            } else {
                format!("q^({e})")
            };
            write!(f, "{coeff}{power}")?;
        }
        if first {
            f.write_str("0")?;
        }
        let t = &self.truncation;
        if t.is_integer() {
            write!(f, " + O(q^{t})")
        } else {
            write!(f, " + O(q^({t}))")
        }
    }
}

impl Serialize for PuiseuxSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<[String; 2]> = self.terms.iter().map(|(e, c)| [fmt_q(e), fmt_q(c)]).collect();
        let mut st = s.serialize_struct("PuiseuxSeries", 2)?;
        st.serialize_field("truncation", &fmt_q(&self.truncation))?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// `∏ (1 - q^{scale·i})` over `i ≥ 1` with `i mod modulus` outside `excluded`,
/// known below `truncation`.
pub fn restricted_product(modulus: i64, excluded: &[i64], scale: &Q, truncation: &Q) -> Result<PuiseuxSeries> {
    if modulus <= 0 {
        return Err(Error::InvalidArgument(format!("modulus must be positive, got {modulus}")));
    }
    if !scale.is_positive() {
        return Err(Error::InvalidArgument(format!("exponent scale must be positive, got {scale}")));
    }
    let excluded: Vec<i64> = excluded.iter().map(|r| r.rem_euclid(modulus)).collect();
    let mut s = PuiseuxSeries::one(truncation.clone());
    let mut i = 1i64;
    loop {
        let e = scale * qi(i);
        if &e >= truncation {
            break;
        }
        if !excluded.contains(&i.rem_euclid(modulus)) {
            // s <- s - q^e s
            let shifted: Vec<(Q, Q)> = s.terms.iter().map(|(x, c)| (x + &e, -c.clone())).collect();
            for (x, c) in shifted {
                s.insert(x, c);
            }
        }
        i += 1;
    }
    Ok(s)
}

/// `∏_{i≥1} (1 - q^i)` below `truncation`.
pub fn euler_function(truncation: &Q) -> PuiseuxSeries {
    restricted_product(1, &[], &Q::one(), truncation).expect("valid arguments")
}

/// `η(q) = q^{1/24} ∏ (1 - q^i)`, known below `1/24 + order`.
pub fn eta(order: i64) -> PuiseuxSeries {
    euler_function(&qi(order)).shift(&q(1, 24))
}

/// Generating function of partitions into parts `≥ 2`: the graded dimension of the Virasoro vacuum module.
pub fn vomega_series(order: i64) -> PuiseuxSeries {
    let one_minus_q = PuiseuxSeries::from_integer_coeffs(&[1, -1], order);
    partition_series(order).mul(&one_minus_q)
}

/// Generating function `∏_{i≥1} (1 - q^i)^{-1}` of all partitions.
pub fn partition_series(order: i64) -> PuiseuxSeries {
    euler_function(&qi(order)).invert().expect("unit leading coefficient")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StringClass {
    /// Root-lattice vectors of norm in `2Z`.
    Even,
    /// Root-lattice vectors in the short-root class (`2/3 + 2Z` for `G2`, `1 + 2Z` for `F4`).
    Short,
}

impl std::str::FromStr for StringClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" => Ok(StringClass::Even),
            "short" => Ok(StringClass::Short),
            _ => Err(Error::InvalidArgument(format!("unknown string-function class `{s}`"))),
        }
    }
}

/// Level-one string function `c^{Λ0}_λ` for the class of `λ`, known to relative order `order`
/// beyond its leading exponent.
///
/// Simply-laced types have a single class, `η^{-rank}`.
pub fn string_function(t: TypeLabel, class: StringClass, order: i64) -> Result<PuiseuxSeries> {
    let n = qi(order);
    let eta_inv = |power: i64| euler_function(&n).pow(-power);
    match (t, class) {
        (TypeLabel::G2, StringClass::Short) => g2_short(order),
        (TypeLabel::G2, StringClass::Even) => {
            let correction =
                eta_inv(3)?.mul(&restricted_product(5, &[1, -1], &q(1, 3), &n)?).shift(&(q(-1, 8) + q(1, 120)));
            Ok(g2_short(order)?.add(&correction))
        }
        (TypeLabel::F4, StringClass::Short) => f4_short(order),
        (TypeLabel::F4, StringClass::Even) => {
            let eta_half = euler_function(&(qi(2) * &n)).substitute_power(&q(1, 2))?;
            let correction = eta_inv(6)?
                .mul(&eta_half)
                .mul(&restricted_product(5, &[1, -1], &q(1, 2), &n)?)
                .shift(&(q(-1, 4) + q(1, 48) + q(1, 80)));
            Ok(f4_short(order)?.add(&correction))
        }
        (t, StringClass::Even) if t.is_simply_laced() => Ok(eta_inv(t.rank() as i64)?.shift(&-q(t.rank() as i64, 24))),
        _ => Err(Error::InvalidArgument(format!("no string function for ({t}, {class:?})"))),
    }
}

fn g2_short(order: i64) -> Result<PuiseuxSeries> {
    let n = qi(order);
    Ok(euler_function(&n).pow(-3)?.mul(&restricted_product(5, &[2, -2], &qi(3), &n)?).shift(&(q(-1, 8) + q(27, 40))))
}

fn f4_short(order: i64) -> Result<PuiseuxSeries> {
    let n = qi(order);
    let eta_sq = euler_function(&n).substitute_power(&qi(2))?.truncate(&n);
    Ok(euler_function(&n)
        .pow(-6)?
        .mul(&eta_sq)
        .mul(&restricted_product(5, &[2, -2], &qi(2), &n)?)
        .shift(&(q(-1, 4) + q(1, 12) + q(9, 20))))
}

/// `s = -|ρ|²/(2(1+h∨)h∨)`.
pub fn rho_shift(rs: &RootSystem) -> Q {
    let h = qi(rs.dual_coxeter as i64);
    -rs.rho_norm() / (qi(2) * (Q::one() + &h) * h)
}

/// Class of a displacement norm for the non-simply-laced string functions.
fn norm_class(t: TypeLabel, norm: &Q) -> Result<StringClass> {
    let two = qi(2);
    let reduce = |x: &Q| x - (x / &two).floor() * &two;
    let r = reduce(norm);
    match t {
        TypeLabel::G2 if r.is_zero() => Ok(StringClass::Even),
        TypeLabel::G2 if r == q(2, 3) => Ok(StringClass::Short),
        TypeLabel::F4 if r.is_zero() => Ok(StringClass::Even),
        TypeLabel::F4 if r.is_one() => Ok(StringClass::Short),
        t if t.is_simply_laced() && r.is_zero() => Ok(StringClass::Even),
        _ => Err(Error::SeriesCheck(format!("{t}: displacement norm {norm} lies in no known class"))),
    }
}

/// Signed sums `Σ ε(w) q^{|ρ-wρ|²/2}` split by string-function class.
#[derive(Clone, Debug, Serialize)]
pub struct WeylPolynomials {
    pub even: PuiseuxSeries,
    pub short: PuiseuxSeries,
}

pub fn weyl_polynomials(census: &Census, truncation: &Q) -> Result<WeylPolynomials> {
    let mut even = PuiseuxSeries::zero(truncation.clone());
    let mut short = PuiseuxSeries::zero(truncation.clone());
    for cell in &census.cells {
        let term =
            PuiseuxSeries::monomial(qi(cell.sign as i64 * cell.count as i64), &cell.norm / qi(2), truncation.clone());
        match norm_class(census.type_label, &cell.norm)? {
            StringClass::Even => even = even.add(&term),
            StringClass::Short => short = short.add(&term),
        }
    }
    Ok(WeylPolynomials { even, short })
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointSeries {
    pub type_label: TypeLabel,
    pub method: String,
    #[serde(serialize_with = "crate::rational::ser::q")]
    pub shift: Q,
    pub weyl_polynomials: WeylPolynomials,
    pub series: PuiseuxSeries,
}

/// Graded dimension `q^{-s} Σ_w ε(w) q^{|ρ-wρ|²/2} c_w` of the fixed-point
/// subalgebra, known below `q^order`.
///
/// `G2` and `F4` use the full Weyl group and their two string functions.
/// Simply-laced types use the pruned orbit walk and `η^{-rank}`.
pub fn fixed_point_graded_dimension(t: TypeLabel, order: i64) -> Result<FixedPointSeries> {
    let rs = build_root_system(t)?;
    let s = rho_shift(&rs);
    let bound = qi(2 * order);
    let (census, method) = match t {
        TypeLabel::G2 | TypeLabel::F4 => {
            let w = enumerate_weyl_group(&rs, DEFAULT_WEYL_CAP)?;
            (rho_displacement_census(&rs, &w, Some(&bound)), "weyl-group")
        }
        t if t.is_simply_laced() => (bounded_census(&rs, &bound), "orbit-walk"),
        _ => return Err(Error::UnsupportedType(t.to_string())),
    };
    let polys = weyl_polynomials(&census, &qi(order))?;
    // The string functions start at q^s; ask for enough relative order to reach q^order after the shift.
    let even = string_function(t, StringClass::Even, order)?;
    let mut total = polys.even.mul(&even);
    if !polys.short.is_zero() {
        let short = string_function(t, StringClass::Short, order)?;
        total = total.add(&polys.short.mul(&short));
    }
    let series = total.shift(&-s.clone()).truncate(&qi(order));
    for e in series.terms.keys() {
        if !e.is_integer() || e.is_negative() {
            return Err(Error::ExponentIntegrality(e.clone()));
        }
    }
    if series.coefficient(&Q::zero()) != Q::one() || series.valuation() != Some(&Q::zero()) {
        return Err(Error::SeriesCheck(format!("{t}: fixed-point series does not start with 1: {series}")));
    }
    if series.truncation() < &qi(order) {
        return Err(Error::SeriesCheck(format!(
            "{t}: truncation {} below requested order {order}",
            series.truncation()
        )));
    }
    Ok(FixedPointSeries { type_label: t, method: method.to_string(), shift: s, weyl_polynomials: polys, series })
}

/// Printed graded dimensions of fixed-point subalgebras for the simply-laced
/// level-one cases; `A1` is the Virasoro vacuum series itself.
pub fn reference_series(t: TypeLabel) -> Result<PuiseuxSeries> {
    let coeffs: &[i64] = match t {
        TypeLabel::A(1) => return Ok(vomega_series(DEFAULT_ORDER)),
        TypeLabel::A(2) => &[1, 0, 1, 2, 3, 4, 8],
        TypeLabel::D(4) => &[1, 0, 1, 1, 4, 4, 9],
        TypeLabel::E6 => &[1, 0, 1, 1, 2, 3, 6],
        TypeLabel::E7 => &[1, 0, 1, 1, 2, 2, 5],
        TypeLabel::E8 => &[1, 0, 1, 1, 2, 2, 4],
        _ => return Err(Error::UnsupportedType(t.to_string())),
    };
    Ok(PuiseuxSeries::from_integer_coeffs(coeffs, coeffs.len() as i64))
}

/// Printed fixture continued by the computed series up to `q^order`; the two must
/// agree on every printed coefficient.
pub fn extended_reference_series(t: TypeLabel, order: i64) -> Result<PuiseuxSeries> {
    let printed = reference_series(t)?;
    if printed.truncation() >= &qi(order) {
        return Ok(printed.truncate(&qi(order)));
    }
    let computed = fixed_point_graded_dimension(t, order)?.series;
    let known = printed.truncation().clone();
    if computed.truncate(&known) != printed {
        return Err(Error::SeriesCheck(format!(
            "{t}: computed series {computed} disagrees with the fixture {printed}"
        )));
    }
    Ok(computed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassDegree {
    pub degree: i64,
    /// True when the series agrees with the Virasoro series through every known degree.
    pub truncation_limited: bool,
}

/// Largest `n` such that the series agrees with [`vomega_series`] in degrees `0..=n`.
pub fn class_sn_degree(series: &PuiseuxSeries) -> Result<ClassDegree> {
    let coeffs = series.integer_coefficients()?;
    let known = coeffs.len() as i64;
    let vir = vomega_series(known.max(1));
    for (n, c) in coeffs.iter().enumerate() {
        if *c != vir.coefficient(&qi(n as i64)) {
            return Ok(ClassDegree { degree: n as i64 - 1, truncation_limited: false });
        }
    }
    if known - 1 < 2 {
        return Err(Error::TruncationTooShort { truncation: series.truncation().clone() });
    }
    Ok(ClassDegree { degree: known - 1, truncation_limited: true })
}
