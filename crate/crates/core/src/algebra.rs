//! Exact 2×2 matrix arithmetic for anticommutation-algebra proofs.
//!
//! Identity checks run over Gaussian integers (`Complex<i64>`), so "equal"
//! means equal, with no tolerance. The same generic matrix type is reused
//! with polynomial entries to expand squared operator matrices over
//! indeterminate momentum symbols, and with `Complex64` entries by the
//! floating-point spinor code.

use num_complex::Complex;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact complex integers a + b·j.
pub type GaussInt = Complex<i64>;

pub fn gi(re: i64, im: i64) -> GaussInt {
    Complex::new(re, im)
}

/// Ring operations needed for 2×2 matrix arithmetic.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Add<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Add<Output = T>
        + Mul<Output = T>
{
}

/// Row-major 2×2 matrix [[a, b], [c, d]].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> Matrix2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Matrix2<T> {
        Matrix2 { a, b, c, d }
    }

    pub fn identity() -> Matrix2<T> {
        Matrix2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn zero() -> Matrix2<T> {
        Matrix2::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn add(&self, other: &Matrix2<T>) -> Matrix2<T> {
        Matrix2::new(
            self.a.clone() + other.a.clone(),
            self.b.clone() + other.b.clone(),
            self.c.clone() + other.c.clone(),
            self.d.clone() + other.d.clone(),
        )
    }

    pub fn sub(&self, other: &Matrix2<T>) -> Matrix2<T> {
        Matrix2::new(
            self.a.clone() - other.a.clone(),
            self.b.clone() - other.b.clone(),
            self.c.clone() - other.c.clone(),
            self.d.clone() - other.d.clone(),
        )
    }

    pub fn neg(&self) -> Matrix2<T> {
        Matrix2::new(
            -self.a.clone(),
            -self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }

    pub fn mul(&self, other: &Matrix2<T>) -> Matrix2<T> {
        Matrix2::new(
            self.a.clone() * other.a.clone() + self.b.clone() * other.c.clone(),
            self.a.clone() * other.b.clone() + self.b.clone() * other.d.clone(),
            self.c.clone() * other.a.clone() + self.d.clone() * other.c.clone(),
            self.c.clone() * other.b.clone() + self.d.clone() * other.d.clone(),
        )
    }

    pub fn scale(&self, k: &T) -> Matrix2<T> {
        Matrix2::new(
            k.clone() * self.a.clone(),
            k.clone() * self.b.clone(),
            k.clone() * self.c.clone(),
            k.clone() * self.d.clone(),
        )
    }

    /// x·y + y·x
    pub fn anticommutator(x: &Matrix2<T>, y: &Matrix2<T>) -> Matrix2<T> {
        x.mul(y).add(&y.mul(x))
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }
}

/// The exact 2×2 basis set used throughout: identity plus the diagonal,
/// imaginary-antidiagonal, and real-antidiagonal matrices (numbered 1..3
/// in that order).
pub fn sigma0() -> Matrix2<GaussInt> {
    Matrix2::identity()
}

pub fn sigma1() -> Matrix2<GaussInt> {
    Matrix2::new(gi(1, 0), gi(0, 0), gi(0, 0), gi(-1, 0))
}

pub fn sigma2() -> Matrix2<GaussInt> {
    Matrix2::new(gi(0, 0), gi(0, -1), gi(0, 1), gi(0, 0))
}

pub fn sigma3() -> Matrix2<GaussInt> {
    Matrix2::new(gi(0, 0), gi(1, 0), gi(1, 0), gi(0, 0))
}

pub fn pauli(i: usize) -> Option<Matrix2<GaussInt>> {
    match i {
        0 => Some(sigma0()),
        1 => Some(sigma1()),
        2 => Some(sigma2()),
        3 => Some(sigma3()),
        _ => None,
    }
}

fn fmt_gauss(z: &GaussInt) -> String {
    match (z.re, z.im) {
        (0, 0) => "0".to_string(),
        (re, 0) => format!("{re}"),
        (0, 1) => "j".to_string(),
        (0, -1) => "-j".to_string(),
        (0, im) => format!("{im}j"),
        (re, 1) => format!("{re}+j"),
        (re, -1) => format!("{re}-j"),
        (re, im) if im > 0 => format!("{re}+{im}j"),
        (re, im) => format!("{re}{im}j"),
    }
}

impl fmt::Display for Matrix2<GaussInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            fmt_gauss(&self.a),
            fmt_gauss(&self.b),
            fmt_gauss(&self.c),
            fmt_gauss(&self.d)
        )
    }
}

/// Result of one exact identity check: `residual = lhs − rhs`, so the
/// identity holds iff the residual is the zero matrix.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub residual: Matrix2<GaussInt>,
}

fn check(name: &str, lhs: &Matrix2<GaussInt>, rhs: &Matrix2<GaussInt>) -> IdentityCheck {
    let residual = lhs.sub(rhs);
    IdentityCheck {
        name: name.to_string(),
        holds: residual.is_zero(),
        residual,
    }
}

/// Exact survey of the basis algebra: squares, anticommutators, and the
/// pairwise products in both operand orders.
///
/// With this basis the cyclic products in index order carry −j
/// (σ₁σ₂ = −jσ₃, σ₃σ₁ = −jσ₂, σ₂σ₃ = −jσ₁); the +j form holds for the
/// reversed operand order. `cyclic_sign`/`reversed_sign` record which sign
/// each order produces, determined by computation rather than assumption.
#[derive(Debug, Clone)]
pub struct AlgebraReport {
    pub checks: Vec<IdentityCheck>,
    /// Sign σ of j in σ₁σ₂ = σ·jσ₃ (and cyclic); 0 if no match (never).
    pub cyclic_sign: i64,
    /// Sign of j in σ₂σ₁ = σ·jσ₃ (and cyclic reversals).
    pub reversed_sign: i64,
}

impl AlgebraReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn product_sign(product: &Matrix2<GaussInt>, target: &Matrix2<GaussInt>) -> i64 {
    let plus_j = target.scale(&gi(0, 1));
    let minus_j = target.scale(&gi(0, -1));
    if *product == plus_j {
        1
    } else if *product == minus_j {
        -1
    } else {
        0
    }
}

pub fn algebra_check() -> AlgebraReport {
    let s = [sigma0(), sigma1(), sigma2(), sigma3()];
    let identity = Matrix2::identity();
    let mut checks = Vec::new();

    for i in 1..=3 {
        checks.push(check(&format!("sigma{i}^2 = I"), &s[i].mul(&s[i]), &identity));
    }
    for i in 1..=3 {
        for jdx in i + 1..=3 {
            checks.push(check(
                &format!("sigma{i}*sigma{jdx} + sigma{jdx}*sigma{i} = 0"),
                &Matrix2::anticommutator(&s[i], &s[jdx]),
                &Matrix2::zero(),
            ));
        }
    }
    for i in 1..=3 {
        checks.push(check(&format!("sigma0*sigma{i} = sigma{i}"), &s[0].mul(&s[i]), &s[i]));
    }

    // Pairwise products, both orders, against the sign each order
    // actually produces.
    let cyclic: [(usize, usize, usize); 3] = [(1, 2, 3), (3, 1, 2), (2, 3, 1)];
    let mut cyclic_sign = 0;
    let mut reversed_sign = 0;
    for &(i, jdx, k) in &cyclic {
        let fwd = s[i].mul(&s[jdx]);
        let rev = s[jdx].mul(&s[i]);
        let fs = product_sign(&fwd, &s[k]);
        let rs = product_sign(&rev, &s[k]);
        cyclic_sign = if cyclic_sign == 0 { fs } else { cyclic_sign.min(fs) };
        reversed_sign = if reversed_sign == 0 { rs } else { reversed_sign.min(rs) };
        let fwd_name = format!(
            "sigma{i}*sigma{jdx} = {}j*sigma{k}",
            if fs >= 0 { "+" } else { "-" }
        );
        let rev_name = format!(
            "sigma{jdx}*sigma{i} = {}j*sigma{k}",
            if rs >= 0 { "+" } else { "-" }
        );
        checks.push(check(&fwd_name, &fwd, &s[k].scale(&gi(0, fs))));
        checks.push(check(&rev_name, &rev, &s[k].scale(&gi(0, rs))));
    }

    AlgebraReport {
        checks,
        cyclic_sign,
        reversed_sign,
    }
}

/// A candidate (α₀, α₁; β) triple for factoring p₀² + pₓ² + 1.
#[derive(Debug, Clone)]
pub struct DiracAssignment {
    pub alpha0: Matrix2<GaussInt>,
    pub alpha1: Matrix2<GaussInt>,
    pub beta_m: Matrix2<GaussInt>,
}

impl DiracAssignment {
    /// The primary assignment (σ₃, σ₁; σ₂).
    pub fn standard() -> DiracAssignment {
        DiracAssignment {
            alpha0: sigma3(),
            alpha1: sigma1(),
            beta_m: sigma2(),
        }
    }
}

/// Anticommutation and square conditions certifying the factorization
/// (α₀p₀ + α₁pₓ + β)² = (p₀² + pₓ² + 1)·I.
pub fn decomposition_check(assign: &DiracAssignment) -> AlgebraReport {
    let identity = Matrix2::identity();
    let zero = Matrix2::zero();
    let checks = vec![
        check(
            "alpha0*alpha1 + alpha1*alpha0 = 0",
            &Matrix2::anticommutator(&assign.alpha0, &assign.alpha1),
            &zero,
        ),
        check(
            "beta*alpha0 + alpha0*beta = 0",
            &Matrix2::anticommutator(&assign.beta_m, &assign.alpha0),
            &zero,
        ),
        check(
            "beta*alpha1 + alpha1*beta = 0",
            &Matrix2::anticommutator(&assign.beta_m, &assign.alpha1),
            &zero,
        ),
        check("alpha0^2 = I", &assign.alpha0.mul(&assign.alpha0), &identity),
        check("alpha1^2 = I", &assign.alpha1.mul(&assign.alpha1), &identity),
        check("beta^2 = I", &assign.beta_m.mul(&assign.beta_m), &identity),
    ];
    AlgebraReport {
        checks,
        cyclic_sign: 0,
        reversed_sign: 0,
    }
}

/// Polynomial in two indeterminates p₀, pₓ with exact complex-integer
/// coefficients. Zero coefficients are never stored, so `==` is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), GaussInt>,
}

impl Poly2 {
    pub fn constant(k: GaussInt) -> Poly2 {
        let mut terms = BTreeMap::new();
        if !k.is_zero() {
            terms.insert((0, 0), k);
        }
        Poly2 { terms }
    }

    /// The indeterminate p₀.
    pub fn p0() -> Poly2 {
        let mut terms = BTreeMap::new();
        terms.insert((1, 0), gi(1, 0));
        Poly2 { terms }
    }

    /// The indeterminate pₓ.
    pub fn px() -> Poly2 {
        let mut terms = BTreeMap::new();
        terms.insert((0, 1), gi(1, 0));
        Poly2 { terms }
    }

    fn insert(&mut self, key: (u32, u32), value: GaussInt) {
        let entry = self.terms.entry(key).or_insert_with(|| gi(0, 0));
        *entry += value;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Poly2) -> Poly2 {
        let mut out = self;
        for (key, value) in rhs.terms {
            out.insert(key, value);
        }
        out
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Poly2) -> Poly2 {
        self + (-rhs)
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Poly2) -> Poly2 {
        let mut out = Poly2 {
            terms: BTreeMap::new(),
        };
        for (&(a0, a1), &av) in &self.terms {
            for (&(b0, b1), &bv) in &rhs.terms {
                out.insert((a0 + b0, a1 + b1), av * bv);
            }
        }
        out
    }
}

impl Zero for Poly2 {
    fn zero() -> Poly2 {
        Poly2 {
            terms: BTreeMap::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly2 {
    fn one() -> Poly2 {
        Poly2::constant(gi(1, 0))
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first for readability.
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(a, b)| (std::cmp::Reverse(a + b), std::cmp::Reverse(a)));
        let mut first = true;
        for key in keys {
            let coeff = &self.terms[key];
            let mono = match *key {
                (0, 0) => String::new(),
                (1, 0) => "p0".to_string(),
                (0, 1) => "px".to_string(),
                (a, 0) => format!("p0^{a}"),
                (0, b) => format!("px^{b}"),
                (a, b) => format!("p0^{a}*px^{b}"),
            };
            let coeff_text = fmt_gauss(coeff);
            let term = if mono.is_empty() {
                coeff_text
            } else if coeff_text == "1" {
                mono
            } else if coeff_text == "-1" {
                format!("-{mono}")
            } else if coeff.im != 0 && coeff.re != 0 {
                format!("({coeff_text})*{mono}")
            } else {
                format!("{coeff_text}*{mono}")
            };
            if first {
                write!(f, "{term}")?;
                first = false;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

fn lift(m: &Matrix2<GaussInt>) -> Matrix2<Poly2> {
    Matrix2::new(
        Poly2::constant(m.a),
        Poly2::constant(m.b),
        Poly2::constant(m.c),
        Poly2::constant(m.d),
    )
}

/// Symbolic square of α₀·p₀ + α₁·pₓ + β over indeterminate p₀, pₓ.
pub fn mass_operator_square(assign: &DiracAssignment) -> Matrix2<Poly2> {
    let op = lift(&assign.alpha0)
        .scale(&Poly2::p0())
        .add(&lift(&assign.alpha1).scale(&Poly2::px()))
        .add(&lift(&assign.beta_m));
    op.mul(&op)
}

/// The target (p₀² + pₓ² + 1)·I.
pub fn mass_square_target() -> Matrix2<Poly2> {
    let scalar = Poly2::p0() * Poly2::p0() + Poly2::px() * Poly2::px() + Poly2::one();
    Matrix2::<Poly2>::identity().scale(&scalar)
}

/// Symbolic square of α₀·p₀ + α₁·pₓ (no mass matrix).
pub fn massless_operator_square(
    alpha0: &Matrix2<GaussInt>,
    alpha1: &Matrix2<GaussInt>,
) -> Matrix2<Poly2> {
    let op = lift(alpha0)
        .scale(&Poly2::p0())
        .add(&lift(alpha1).scale(&Poly2::px()));
    op.mul(&op)
}

/// The target (p₀² + pₓ²)·I.
pub fn massless_square_target() -> Matrix2<Poly2> {
    let scalar = Poly2::p0() * Poly2::p0() + Poly2::px() * Poly2::px();
    Matrix2::<Poly2>::identity().scale(&scalar)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_entries_are_exact() {
        assert_eq!(sigma1(), Matrix2::new(gi(1, 0), gi(0, 0), gi(0, 0), gi(-1, 0)));
        assert_eq!(sigma2(), Matrix2::new(gi(0, 0), gi(0, -1), gi(0, 1), gi(0, 0)));
        assert_eq!(sigma3(), Matrix2::new(gi(0, 0), gi(1, 0), gi(1, 0), gi(0, 0)));
        assert_eq!(pauli(0).unwrap(), Matrix2::identity());
        assert!(pauli(4).is_none());
    }

    #[test]
    fn squares_and_anticommutators_exact() {
        let report = algebra_check();
        assert!(report.all_hold(), "failing checks: {:?}", report
            .checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| &c.name)
            .collect::<Vec<_>>());
    }

    #[test]
    fn cyclic_products_carry_minus_j_in_index_order() {
        // Direct exact computation, not a report lookup.
        let minus_j = gi(0, -1);
        assert_eq!(sigma1().mul(&sigma2()), sigma3().scale(&minus_j));
        assert_eq!(sigma3().mul(&sigma1()), sigma2().scale(&minus_j));
        assert_eq!(sigma2().mul(&sigma3()), sigma1().scale(&minus_j));
        // Reversed operand order flips the sign.
        let plus_j = gi(0, 1);
        assert_eq!(sigma2().mul(&sigma1()), sigma3().scale(&plus_j));
        assert_eq!(sigma1().mul(&sigma3()), sigma2().scale(&plus_j));
        assert_eq!(sigma3().mul(&sigma2()), sigma1().scale(&plus_j));

        let report = algebra_check();
        assert_eq!(report.cyclic_sign, -1);
        assert_eq!(report.reversed_sign, 1);
    }

    #[test]
    fn standard_assignment_passes_all_conditions() {
        let report = decomposition_check(&DiracAssignment::standard());
        assert!(report.all_hold());
    }

    #[test]
    fn alternative_assignment_also_valid() {
        let report = decomposition_check(&DiracAssignment {
            alpha0: sigma1(),
            alpha1: sigma2(),
            beta_m: sigma3(),
        });
        assert!(report.all_hold());
    }

    #[test]
    fn repeated_matrix_fails_anticommutation() {
        let report = decomposition_check(&DiracAssignment {
            alpha0: sigma1(),
            alpha1: sigma1(),
            beta_m: sigma2(),
        });
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.holds)
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(failing, vec!["alpha0*alpha1 + alpha1*alpha0 = 0"]);
        // 2σ₁² = 2I is the residual
        assert_eq!(
            report.checks[0].residual,
            Matrix2::identity().scale(&gi(2, 0))
        );
    }

    #[test]
    fn symbolic_mass_square_reproduces_quadratic_form() {
        let square = mass_operator_square(&DiracAssignment::standard());
        assert_eq!(square, mass_square_target());
        assert_eq!(square.a.to_string(), "p0^2 + px^2 + 1");
        assert_eq!(square.b.to_string(), "0");
    }

    #[test]
    fn symbolic_mass_square_detects_bad_assignment() {
        let bad = DiracAssignment {
            alpha0: sigma1(),
            alpha1: sigma1(),
            beta_m: sigma2(),
        };
        assert_ne!(mass_operator_square(&bad), mass_square_target());
    }

    #[test]
    fn symbolic_massless_square() {
        assert_eq!(
            massless_operator_square(&sigma3(), &sigma1()),
            massless_square_target()
        );
        assert_ne!(
            massless_operator_square(&sigma3(), &sigma3()),
            massless_square_target()
        );
    }

    #[test]
    fn poly_arithmetic_basics() {
        let p = Poly2::p0() + Poly2::constant(gi(1, 0));
        let q = p.clone() * p.clone(); // (p0 + 1)² = p0² + 2p0 + 1
        let expected = Poly2::p0() * Poly2::p0()
            + Poly2::constant(gi(2, 0)) * Poly2::p0()
            + Poly2::one();
        assert_eq!(q, expected);
        assert!((p.clone() - p).is_zero());
    }

    #[test]
    fn gauss_formatting() {
        assert_eq!(fmt_gauss(&gi(0, 0)), "0");
        assert_eq!(fmt_gauss(&gi(-1, 0)), "-1");
        assert_eq!(fmt_gauss(&gi(0, 1)), "j");
        assert_eq!(fmt_gauss(&gi(0, -2)), "-2j");
        assert_eq!(fmt_gauss(&gi(3, -1)), "3-j");
        assert_eq!(sigma2().to_string(), "[[0, -j], [j, 0]]");
    }
}
