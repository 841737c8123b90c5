//! Hypergeometric operators, the Schwarz list, and polyhedral functions.
//!
//! The hypergeometric operator with exponent differences `(λ, μ, ν)` at
//! `z = 0, 1, ∞` is taken in normal form. Two triples define projectively
//! related operators (same monodromy up to the classical moves) when one is
//! reached from the other by `λ ↦ a ± λ, μ ↦ b ± μ, ν ↦ c ± ν` with
//! integers `a + b + c` even, followed by any permutation.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactalg::field::{fmt_rational, frac, is_integer, q, qi};
use crate::exactalg::{
    parse_rational, Field, NfElem, NumberField, Poly, Polynomial, RatFunc, RationalFunction,
};
use crate::fuchsian::DifferentialOperator;
use crate::numeric::{cluster, polynomial_roots, ProjPoint};

/// Exponent differences at `z = 0, 1, ∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SchwarzTriple {
    pub lambda: BigRational,
    pub mu: BigRational,
    pub nu: BigRational,
}

impl SchwarzTriple {
    pub fn new(lambda: BigRational, mu: BigRational, nu: BigRational) -> Self {
        SchwarzTriple { lambda, mu, nu }
    }

    pub fn from_ints(t: [(i64, i64); 3]) -> Self {
        Self::new(q(t[0].0, t[0].1), q(t[1].0, t[1].1), q(t[2].0, t[2].1))
    }

    /// Parse `"a,b,c"` with each entry an exact rational.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected three comma-separated rationals, got \"{s}\"")));
        }
        Ok(Self::new(
            parse_rational(parts[0])?,
            parse_rational(parts[1])?,
            parse_rational(parts[2])?,
        ))
    }

    pub fn entries(&self) -> [&BigRational; 3] {
        [&self.lambda, &self.mu, &self.nu]
    }

    /// Entries sorted in decreasing order.
    pub fn sorted_desc(&self) -> [BigRational; 3] {
        let mut v = [self.lambda.clone(), self.mu.clone(), self.nu.clone()];
        v.sort_by(|a, b| b.cmp(a));
        v
    }
}

impl fmt::Display for SchwarzTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            fmt_rational(&self.lambda),
            fmt_rational(&self.mu),
            fmt_rational(&self.nu)
        )
    }
}

/// Finite subgroups of the Möbius group, up to conjugacy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupTag {
    Cyclic(u32),
    Dihedral(u32),
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl GroupTag {
    pub fn order(&self) -> u32 {
        match self {
            GroupTag::Cyclic(n) => *n,
            GroupTag::Dihedral(n) => 2 * n,
            GroupTag::Tetrahedral => 12,
            GroupTag::Octahedral => 24,
            GroupTag::Icosahedral => 60,
        }
    }

    /// Short name: `C3`, `D3`, `A4`, `S4`, `A5`.
    pub fn short_name(&self) -> String {
        match self {
            GroupTag::Cyclic(n) => format!("C{n}"),
            GroupTag::Dihedral(n) => format!("D{n}"),
            GroupTag::Tetrahedral => "A4".into(),
            GroupTag::Octahedral => "S4".into(),
            GroupTag::Icosahedral => "A5".into(),
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.short_name())
    }
}

/// `D^2 + (1-λ²)/(4z²) + (1-μ²)/(4(z-1)²) + (λ²+μ²-1-ν²)/(4z(z-1))`.
pub fn hypergeometric_operator(t: &SchwarzTriple) -> DifferentialOperator {
    let one = BigRational::one();
    let l2 = &t.lambda * &t.lambda;
    let m2 = &t.mu * &t.mu;
    let n2 = &t.nu * &t.nu;
    let quarter = q(1, 4);
    let z = Poly::x();
    let zm1 = Poly::from_ints(&[-1, 1]);
    let term = |c: BigRational, den: Poly| RatFunc::new(Poly::constant(c * &quarter), den).expect("nonzero");
    let b = &(&term(&one - &l2, z.pow(2)) + &term(&one - &m2, zm1.pow(2)))
        + &term(&l2 + &m2 - &one - &n2, &z * &zm1);
    DifferentialOperator::normal(b)
}

fn parity_odd(n: &BigRational) -> bool {
    n.to_integer().to_i64().map(|v| v.rem_euclid(2) == 1).unwrap_or_else(|| {
        let two = num_bigint::BigInt::from(2);
        ((n.to_integer() % &two) + &two) % &two == num_bigint::BigInt::one()
    })
}

/// Canonical representative of the orbit of `t` under the even-sum moves
/// and permutations.
///
/// Each entry can be brought into `(0, 1)` in two ways, `frac(x)` and
/// `1 - frac(x)`, whose integer adjustments have opposite parity (an entry
/// `1/2` therefore has free parity). Among the choices with even total
/// adjustment, the one of least sum is taken, ties broken by the smallest
/// increasing sequence. The result is sorted in decreasing order.
pub fn normalize_triple(t: &SchwarzTriple) -> Result<SchwarzTriple> {
    let mut options: Vec<Vec<(BigRational, bool)>> = Vec::with_capacity(3);
    for x in t.entries() {
        if is_integer(x) {
            return Err(Error::IntegralExponent(format!(
                "triple {t} has the integral entry {}",
                fmt_rational(x)
            )));
        }
        let n = x.floor();
        let f = frac(x);
        let keep_odd = parity_odd(&(-&n));
        let flip_odd = parity_odd(&(&n + BigRational::one()));
        options.push(vec![(f.clone(), keep_odd), (BigRational::one() - &f, flip_odd)]);
    }
    let mut best: Option<(BigRational, Vec<BigRational>)> = None;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let picks = [&options[0][i], &options[1][j], &options[2][k]];
                let odd = picks.iter().filter(|p| p.1).count();
                if odd % 2 == 1 {
                    continue;
                }
                let mut vals: Vec<BigRational> = picks.iter().map(|p| p.0.clone()).collect();
                vals.sort();
                let sum: BigRational = vals.iter().sum();
                let better = match &best {
                    None => true,
                    Some((s, v)) => sum < *s || (sum == *s && vals < *v),
                };
                if better {
                    best = Some((sum, vals));
                }
            }
        }
    }
    let (_, v) = best.expect("some parity choice is even");
    Ok(SchwarzTriple::new(v[2].clone(), v[1].clone(), v[0].clone()))
}

/// A row of the full Schwarz list matched by a triple.
#[derive(Clone, Debug, PartialEq)]
pub struct SchwarzCase {
    /// `"cyclic"`, `"I"`, ..., `"XV"`.
    pub label: String,
    pub group: GroupTag,
    pub normalized: SchwarzTriple,
}

const FULL_LIST: [(&str, [(i64, i64); 3], GroupTag); 14] = [
    ("II", [(1, 2), (1, 3), (1, 3)], GroupTag::Tetrahedral),
    ("III", [(2, 3), (1, 3), (1, 3)], GroupTag::Tetrahedral),
    ("IV", [(1, 2), (1, 3), (1, 4)], GroupTag::Octahedral),
    ("V", [(2, 3), (1, 4), (1, 4)], GroupTag::Octahedral),
    ("VI", [(1, 2), (1, 3), (1, 5)], GroupTag::Icosahedral),
    ("VII", [(2, 5), (1, 3), (1, 3)], GroupTag::Icosahedral),
    ("VIII", [(2, 3), (1, 5), (1, 5)], GroupTag::Icosahedral),
    ("IX", [(1, 2), (2, 5), (1, 5)], GroupTag::Icosahedral),
    ("X", [(3, 5), (1, 3), (1, 5)], GroupTag::Icosahedral),
    ("XI", [(2, 5), (2, 5), (2, 5)], GroupTag::Icosahedral),
    ("XII", [(2, 3), (1, 3), (1, 5)], GroupTag::Icosahedral),
    ("XIII", [(4, 5), (1, 5), (1, 5)], GroupTag::Icosahedral),
    ("XIV", [(1, 2), (2, 5), (1, 3)], GroupTag::Icosahedral),
    ("XV", [(3, 5), (2, 5), (1, 3)], GroupTag::Icosahedral),
];

/// Look a triple up on the full Schwarz list (all fifteen rows plus the
/// cyclic row), modulo the even-sum moves and permutations.
///
/// A triple with exactly one integral entry is accepted only in the cyclic
/// shape `(k, m, ±k + n)`; any other integral entry is an error.
pub fn schwarz_case(t: &SchwarzTriple) -> Result<Option<SchwarzCase>> {
    let integral: Vec<usize> = (0..3).filter(|&i| is_integer(t.entries()[i])).collect();
    match integral.len() {
        0 => {}
        1 => {
            let others: Vec<&BigRational> =
                (0..3).filter(|&i| i != integral[0]).map(|i| t.entries()[i]).collect();
            if is_integer(&(others[0] - others[1])) || is_integer(&(others[0] + others[1])) {
                let f = frac(others[0]);
                let f = f.clone().min(BigRational::one() - &f);
                let n = f.denom().to_u32().ok_or_else(|| {
                    Error::Unsupported(format!("cyclic order of {t} is too large"))
                })?;
                return Ok(Some(SchwarzCase {
                    label: "cyclic".into(),
                    group: GroupTag::Cyclic(n),
                    normalized: SchwarzTriple::new(BigRational::one(), f.clone(), f),
                }));
            }
            return Err(Error::IntegralExponent(format!(
                "triple {t} has an integral entry and is not of cyclic shape"
            )));
        }
        _ => {
            return Err(Error::IntegralExponent(format!(
                "triple {t} has more than one integral entry"
            )))
        }
    }
    let norm = normalize_triple(t)?;
    let half = q(1, 2);
    if norm.lambda == half && norm.mu == half {
        let n = norm.nu.denom().to_u32().ok_or_else(|| {
            Error::Unsupported(format!("dihedral order of {t} is too large"))
        })?;
        return Ok(Some(SchwarzCase {
            label: "I".into(),
            group: GroupTag::Dihedral(n),
            normalized: norm,
        }));
    }
    for (label, row, group) in FULL_LIST {
        let row_norm = normalize_triple(&SchwarzTriple::from_ints(row)).expect("rows are non-integral");
        if row_norm == norm {
            return Ok(Some(SchwarzCase {
                label: label.into(),
                group,
                normalized: norm,
            }));
        }
    }
    Ok(None)
}

/// The finite projective monodromy group of the hypergeometric operator
/// with these exponent differences, if it is on the Schwarz list.
pub fn full_schwarz_lookup(t: &SchwarzTriple) -> Result<Option<GroupTag>> {
    Ok(schwarz_case(t)?.map(|c| c.group))
}

/// Rows of the basic Schwarz list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasicCase {
    Cyclic(u32),
    I(u32),
    II,
    IV,
    VI,
}

impl BasicCase {
    pub fn label(&self) -> &'static str {
        match self {
            BasicCase::Cyclic(_) => "cyclic",
            BasicCase::I(_) => "I",
            BasicCase::II => "II",
            BasicCase::IV => "IV",
            BasicCase::VI => "VI",
        }
    }
}

/// A polyhedral function `z = z(w)`, exact over the rationals or over
/// `Q(√-3)` (embedded with `√-3 = +i√3`).
#[derive(Clone, Debug, PartialEq)]
pub enum PolyhedralMap {
    Rational(RatFunc),
    SqrtMinusThree(RationalFunction<NfElem>),
}

/// The three special values of `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vertex {
    Zero,
    One,
    Infinity,
}

impl PolyhedralMap {
    pub fn degree(&self) -> usize {
        match self {
            PolyhedralMap::Rational(f) => f.degree(),
            PolyhedralMap::SqrtMinusThree(f) => f.degree(),
        }
    }

    /// Numerator and denominator coefficients, lowest degree first.
    pub fn complex_parts(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        match self {
            PolyhedralMap::Rational(f) => (f.num().to_complex_coeffs(), f.den().to_complex_coeffs()),
            PolyhedralMap::SqrtMinusThree(f) => {
                (f.num().to_complex_coeffs(), f.den().to_complex_coeffs())
            }
        }
    }

    pub fn eval_complex(&self, w: Complex64) -> Option<Complex64> {
        match self {
            PolyhedralMap::Rational(f) => f.eval_complex(w),
            PolyhedralMap::SqrtMinusThree(f) => f.eval_complex(w),
        }
    }

    /// Exact fiber over `0`, `1` or `∞`, with multiplicities.
    pub fn vertex_fiber(&self, v: Vertex) -> Result<Vec<(ProjPoint, usize)>> {
        match self {
            PolyhedralMap::Rational(f) => exact_fiber(f, v),
            PolyhedralMap::SqrtMinusThree(f) => exact_fiber(f, v),
        }
    }

    /// Text form in the variable `w`.
    pub fn to_text(&self) -> String {
        match self {
            PolyhedralMap::Rational(f) => f.to_string_var("w"),
            PolyhedralMap::SqrtMinusThree(f) => f.to_string_var("w"),
        }
    }
}

fn exact_fiber<F: Field>(f: &RationalFunction<F>, v: Vertex) -> Result<Vec<(ProjPoint, usize)>> {
    let m = f.degree();
    let poly: Polynomial<F> = match v {
        Vertex::Zero => f.num().clone(),
        Vertex::One => f.num() - f.den(),
        Vertex::Infinity => f.den().clone(),
    };
    let mut out = Vec::new();
    for (part, mult) in poly.squarefree_decomposition() {
        for r in polynomial_roots(&part.to_complex_coeffs(), 1e-12)? {
            out.push((ProjPoint::Finite(r), mult));
        }
    }
    let at_inf = m - poly.deg();
    if at_inf > 0 && !poly.is_zero() {
        out.push((ProjPoint::Infinity, at_inf));
    }
    Ok(out)
}

/// A row of the basic Schwarz list with its polyhedral function.
#[derive(Clone, Debug, PartialEq)]
pub struct SchwarzEntry {
    pub case: BasicCase,
    pub triple: SchwarzTriple,
    pub group: GroupTag,
    pub polyhedral: PolyhedralMap,
}

fn ratfunc_from_ints(num: &Poly, den: &Poly) -> RatFunc {
    RatFunc::new(num.clone(), den.clone()).expect("nonzero denominator")
}

fn sparse(terms: &[(usize, i64)]) -> Poly {
    let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut c = vec![0i64; deg + 1];
    for &(k, v) in terms {
        c[k] += v;
    }
    Poly::from_ints(&c)
}

impl SchwarzEntry {
    /// `(1/n, 1, 1/n)`, `z = w^n`.
    pub fn cyclic(n: u32) -> Self {
        SchwarzEntry {
            case: BasicCase::Cyclic(n),
            triple: SchwarzTriple::new(q(1, n as i64), qi(1), q(1, n as i64)),
            group: GroupTag::Cyclic(n),
            polyhedral: PolyhedralMap::Rational(RatFunc::from_poly(sparse(&[(n as usize, 1)]))),
        }
    }

    /// `(1/2, 1/2, 1/n)`, `z = (w^n + 1)^2 / (4 w^n)`.
    pub fn dihedral(n: u32) -> Self {
        let n_ = n as usize;
        let num = sparse(&[(n_, 1), (0, 1)]).pow(2);
        let den = sparse(&[(n_, 4)]);
        SchwarzEntry {
            case: BasicCase::I(n),
            triple: SchwarzTriple::new(q(1, 2), q(1, 2), q(1, n as i64)),
            group: GroupTag::Dihedral(n),
            polyhedral: PolyhedralMap::Rational(ratfunc_from_ints(&num, &den)),
        }
    }

    /// `(1/2, 1/3, 1/3)`, coefficients in `Q(√-3)`.
    pub fn tetrahedral() -> Self {
        let k = NumberField::sqrt_minus_three();
        let s = k.generator();
        let r = |n: i64| NfElem::rational(qi(n));
        // 12√-3 w^2 (w^4 - 1)^2
        let w4m1 = Polynomial::new(vec![r(-1), r(0), r(0), r(0), r(1)]);
        let num = &Polynomial::monomial(s.clone() * r(12), 2) * &w4m1.pow(2);
        // (w^4 + 2√-3 w^2 + 1)^3
        let base = Polynomial::new(vec![r(1), r(0), s * r(2), r(0), r(1)]);
        let den = base.pow(3);
        SchwarzEntry {
            case: BasicCase::II,
            triple: SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 3)]),
            group: GroupTag::Tetrahedral,
            polyhedral: PolyhedralMap::SqrtMinusThree(RationalFunction::new(num, den).expect("nonzero")),
        }
    }

    /// `(1/2, 1/3, 1/4)`.
    pub fn octahedral() -> Self {
        let num = -&sparse(&[(12, 1), (8, -33), (4, -33), (0, 1)]).pow(2);
        let den = &sparse(&[(4, 108)]) * &sparse(&[(4, 1), (0, -1)]).pow(4);
        SchwarzEntry {
            case: BasicCase::IV,
            triple: SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 4)]),
            group: GroupTag::Octahedral,
            polyhedral: PolyhedralMap::Rational(ratfunc_from_ints(&num, &den)),
        }
    }

    /// `(1/2, 1/3, 1/5)`.
    pub fn icosahedral() -> Self {
        let num = sparse(&[
            (30, 1),
            (25, 522),
            (5, -522),
            (20, -10005),
            (10, -10005),
            (0, 1),
        ])
        .pow(2);
        let den = &sparse(&[(5, 1728)]) * &sparse(&[(10, 1), (5, 11), (0, -1)]).pow(5);
        SchwarzEntry {
            case: BasicCase::VI,
            triple: SchwarzTriple::from_ints([(1, 2), (1, 3), (1, 5)]),
            group: GroupTag::Icosahedral,
            polyhedral: PolyhedralMap::Rational(ratfunc_from_ints(&num, &den)),
        }
    }

    pub fn basic(case: BasicCase) -> Self {
        match case {
            BasicCase::Cyclic(n) => Self::cyclic(n),
            BasicCase::I(n) => Self::dihedral(n),
            BasicCase::II => Self::tetrahedral(),
            BasicCase::IV => Self::octahedral(),
            BasicCase::VI => Self::icosahedral(),
        }
    }

    pub fn degree(&self) -> usize {
        self.polyhedral.degree()
    }

    /// Exponent difference at a vertex.
    pub fn vertex_exponent(&self, v: Vertex) -> &BigRational {
        match v {
            Vertex::Zero => &self.triple.lambda,
            Vertex::One => &self.triple.mu,
            Vertex::Infinity => &self.triple.nu,
        }
    }
}

/// Exact polyhedral function of a basic entry.
pub fn polyhedral_map(e: &SchwarzEntry) -> &PolyhedralMap {
    &e.polyhedral
}

/// All `w` with `z(w) = z0`, with multiplicities.
///
/// The vertices `0`, `1`, `∞` (pass a non-finite `z0` for `∞`) are solved
/// exactly through a squarefree decomposition; any other value uses the
/// numerical root finder on `num - z0·den` with clustering radius `1e-6`.
pub fn invert_polyhedral(e: &SchwarzEntry, z0: Complex64, tol: f64) -> Result<Vec<(ProjPoint, usize)>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if !z0.is_finite() {
        return e.polyhedral.vertex_fiber(Vertex::Infinity);
    }
    if z0 == Complex64::new(0.0, 0.0) {
        return e.polyhedral.vertex_fiber(Vertex::Zero);
    }
    if z0 == Complex64::new(1.0, 0.0) {
        return e.polyhedral.vertex_fiber(Vertex::One);
    }
    let m = e.degree();
    let (num, den) = e.polyhedral.complex_parts();
    let len = num.len().max(den.len());
    let get = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
    let mut coeffs: Vec<Complex64> = (0..len).map(|i| get(&num, i) - z0 * get(&den, i)).collect();
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while coeffs.last().is_some_and(|c| c.norm() <= 1e-14 * scale) {
        coeffs.pop();
    }
    let roots = polynomial_roots(&coeffs, tol)?;
    let mut out: Vec<(ProjPoint, usize)> = cluster(&roots, 1e-6)
        .into_iter()
        .map(|(w, k)| (ProjPoint::Finite(w), k))
        .collect();
    let finite = coeffs.len().saturating_sub(1);
    if finite < m {
        out.push((ProjPoint::Infinity, m - finite));
    }
    Ok(out)
}

/// All numerical roots `w` of `z(w) = z0` (no clustering), sorted by
/// argument and then modulus. Used for branch enumeration at regular values.
pub fn fiber_roots(e: &SchwarzEntry, z0: Complex64, tol: f64) -> Result<Vec<Complex64>> {
    let (num, den) = e.polyhedral.complex_parts();
    let len = num.len().max(den.len());
    let get = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
    let coeffs: Vec<Complex64> = (0..len).map(|i| get(&num, i) - z0 * get(&den, i)).collect();
    let mut roots = polynomial_roots(&coeffs, tol)?;
    roots.sort_by(crate::numeric::arg_modulus_cmp);
    Ok(roots)
}
