//! Multiplicative genera: generating series, class-polynomial sequences, and
//! index pairings against user-supplied characteristic numbers.
//!
//! Two normalizations coexist and are kept explicit throughout:
//!
//! * [`generating_series`] returns the one-variable functions as they enter
//!   the thermodynamic identities: `(x/2)/tanh(x/2)` for L, `(x/2)/sinh(x/2)`
//!   for A-hat, `x/(1 - e^{-x})` for Todd, and the auxiliary `cosh(x/2)`.
//!   In this normalization `L = A-hat * cosh(x/2)` holds coefficient-exactly
//!   and the L series equals the dimensionless internal energy of the
//!   oscillator.
//!
//! * [`multiplicative_sequence`] expands the classical root functions whose
//!   class polynomials carry the textbook coefficients (`L_1 = p_1/3`,
//!   `Ahat_1 = -p_1/24`, `td_1 = c_1/2`): `x/tanh(x)` for L, and the same
//!   functions as above for A-hat and Todd. The halved L variable belongs to
//!   the index formula's `2^l` prefactor; see [`signature_index`].
//!
//! L and A-hat expand in squared roots (elementary symmetric functions of
//! `x_i^2` become Pontryagin classes); Todd expands in unsquared Chern roots.
//! The convention travels with [`GenusKind`] rather than being inferred.

mod bernoulli;
mod symmetric;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, factorial, rat, Rational};
use crate::series::PowerSeries;

pub use bernoulli::bernoulli_numbers;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusKind {
    /// Signature genus, generating function `(x/2)/tanh(x/2)`.
    L,
    /// Dirac-index genus, generating function `(x/2)/sinh(x/2)`.
    AHat,
    /// Arithmetic-genus class, generating function `x/(1 - e^{-x})`.
    Todd,
    /// Auxiliary factor `cosh(x/2)` relating L to A-hat; not itself a genus.
    CoshHalf,
}

impl GenusKind {
    /// Variable convention for the class polynomials of this kind.
    pub fn variable(self) -> ClassVariable {
        match self {
            GenusKind::L | GenusKind::AHat | GenusKind::CoshHalf => ClassVariable::Pontryagin,
            GenusKind::Todd => ClassVariable::Chern,
        }
    }
}

impl fmt::Display for GenusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GenusKind::L => "L",
            GenusKind::AHat => "AHAT",
            GenusKind::Todd => "TODD",
            GenusKind::CoshHalf => "COSH_HALF",
        };
        write!(f, "{name}")
    }
}

impl std::str::FromStr for GenusKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "L" => Ok(GenusKind::L),
            "AHAT" | "A_HAT" => Ok(GenusKind::AHat),
            "TODD" => Ok(GenusKind::Todd),
            "COSH_HALF" | "COSHHALF" => Ok(GenusKind::CoshHalf),
            other => Err(format!(
                "unknown genus kind {other:?} (expected L, AHAT, TODD or COSH_HALF)"
            )),
        }
    }
}

/// Which graded variables a class polynomial lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassVariable {
    /// `p_i`: elementary symmetric functions of squared roots, one unit of
    /// degree per four cohomological degrees.
    Pontryagin,
    /// `c_i`: elementary symmetric functions of unsquared roots, one unit of
    /// degree per two cohomological degrees.
    Chern,
}

impl ClassVariable {
    pub fn letter(self) -> char {
        match self {
            ClassVariable::Pontryagin => 'p',
            ClassVariable::Chern => 'c',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenusError {
    /// `num_roots` below the requested expansion degree.
    InsufficientRoots { needed: u32, got: u32 },
    /// A monomial required by evaluation has no supplied pairing.
    MissingCharacteristicNumber(String),
    /// The polynomial list has no entry of the required degree.
    MissingDegree(u32),
    /// A monomial key such as `p1^2*p2` failed to parse.
    BadMonomial(String),
}

impl fmt::Display for GenusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenusError::InsufficientRoots { needed, got } => {
                write!(f, "need at least {needed} formal roots, got {got}")
            }
            GenusError::MissingCharacteristicNumber(m) => {
                write!(f, "no characteristic number supplied for {m}")
            }
            GenusError::MissingDegree(d) => {
                write!(f, "no class polynomial of degree {d} available")
            }
            GenusError::BadMonomial(s) => write!(f, "cannot parse class monomial {s:?}"),
        }
    }
}

impl std::error::Error for GenusError {}

/// Monomial in graded class variables: a sorted multiset of indices, so
/// `p_1^2 p_2` is `[1, 1, 2]` and the empty list is the constant monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClassMonomial(Vec<u32>);

impl ClassMonomial {
    pub fn new(mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        ClassMonomial(indices)
    }

    pub fn constant() -> Self {
        ClassMonomial(Vec::new())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    /// Weighted degree: the sum of the class indices.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Canonical string such as `p1^2*p2` (ascending indices, `^` for
    /// multiplicity, `*` between distinct classes); the constant monomial
    /// formats as `1`.
    pub fn format(&self, variable: ClassVariable) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let letter = variable.letter();
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let idx = self.0[i];
            let mult = self.0[i..].iter().take_while(|&&j| j == idx).count();
            if mult == 1 {
                parts.push(format!("{letter}{idx}"));
            } else {
                parts.push(format!("{letter}{idx}^{mult}"));
            }
            i += mult;
        }
        parts.join("*")
    }

    /// Parses the canonical format; the letter (`p` or `c`) is accepted in
    /// either case and not checked against a convention here.
    pub fn parse(s: &str) -> Result<Self, GenusError> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(ClassMonomial::constant());
        }
        let mut indices = Vec::new();
        for factor in s.split('*') {
            let factor = factor.trim();
            let (base, mult) = match factor.split_once('^') {
                Some((b, m)) => {
                    let mult: u32 = m
                        .trim()
                        .parse()
                        .map_err(|_| GenusError::BadMonomial(s.to_string()))?;
                    (b.trim(), mult)
                }
                None => (factor, 1),
            };
            let mut chars = base.chars();
            match chars.next() {
                Some('p') | Some('c') | Some('P') | Some('C') => {}
                _ => return Err(GenusError::BadMonomial(s.to_string())),
            }
            let idx: u32 = chars
                .as_str()
                .parse()
                .map_err(|_| GenusError::BadMonomial(s.to_string()))?;
            if idx == 0 || mult == 0 {
                return Err(GenusError::BadMonomial(s.to_string()));
            }
            indices.extend(std::iter::repeat_n(idx, mult as usize));
        }
        Ok(ClassMonomial::new(indices))
    }

    /// Product of monomials: multiset union of the indices.
    pub fn mul(&self, other: &Self) -> Self {
        let mut indices = self.0.clone();
        indices.extend_from_slice(&other.0);
        ClassMonomial::new(indices)
    }
}

/// Homogeneous polynomial of one weighted degree in graded class variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPolynomial {
    pub degree: u32,
    pub variable: ClassVariable,
    /// Monomial -> coefficient; zero coefficients are absent.
    pub terms: BTreeMap<ClassMonomial, Rational>,
}

impl ClassPolynomial {
    pub fn constant_one(variable: ClassVariable) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ClassMonomial::constant(), Rational::one());
        ClassPolynomial {
            degree: 0,
            variable,
            terms,
        }
    }

    pub fn zero(degree: u32, variable: ClassVariable) -> Self {
        ClassPolynomial {
            degree,
            variable,
            terms: BTreeMap::new(),
        }
    }

    /// Graded product; degrees add, matching conventions required.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.variable, other.variable,
            "cannot multiply polynomials in different class variables"
        );
        let mut terms: BTreeMap<ClassMonomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let entry = terms.entry(m).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        ClassPolynomial {
            degree: self.degree + other.degree,
            variable: self.variable,
            terms,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.variable, other.variable);
        assert_eq!(self.degree, other.degree, "graded sum requires equal degree");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        ClassPolynomial {
            degree: self.degree,
            variable: self.variable,
            terms,
        }
    }

    /// Substitutes supplied pairings for the monomials. The constant monomial
    /// evaluates to 1; any other missing monomial is an error.
    pub fn evaluate(
        &self,
        numbers: &BTreeMap<String, Rational>,
    ) -> Result<Rational, GenusError> {
        let mut acc = Rational::zero();
        for (mono, coeff) in &self.terms {
            if mono.indices().is_empty() {
                acc += coeff;
                continue;
            }
            let key = mono.format(self.variable);
            let value = numbers
                .get(&key)
                .ok_or(GenusError::MissingCharacteristicNumber(key))?;
            acc += coeff * value;
        }
        Ok(acc)
    }
}

impl Serialize for ClassPolynomial {
    /// `{"degree": d, "terms": {"p1^2": "-1/45", ...}}`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ClassPolynomial", 2)?;
        st.serialize_field("degree", &self.degree)?;
        let terms: BTreeMap<String, String> = self
            .terms
            .iter()
            .map(|(m, c)| (m.format(self.variable), rational::format_rational(c)))
            .collect();
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Characteristic data for one manifold: the pairings of class monomials and
/// Chern-character components against the fundamental class.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldClassData {
    pub name: String,
    /// Half dimension as it enters the `2^l` index prefactor. For the data
    /// sets handled here it is also the weighted degree of the top class
    /// polynomial (degree in units of four for Pontryagin conventions).
    pub l: u32,
    /// Pairing of each class monomial (key like `p1` or `p1^2`) with the
    /// fundamental class.
    pub characteristic_numbers: BTreeMap<String, Rational>,
    /// Pairing of each Chern-character degree component with the fundamental
    /// class; an absent map means the zero bundle.
    pub chern_character_numbers: BTreeMap<u32, Rational>,
}

impl Serialize for ManifoldClassData {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ManifoldClassData", 4)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("l", &self.l)?;
        let chars: BTreeMap<&String, String> = self
            .characteristic_numbers
            .iter()
            .map(|(k, v)| (k, rational::format_rational(v)))
            .collect();
        st.serialize_field("characteristic_numbers", &chars)?;
        let ch: BTreeMap<String, String> = self
            .chern_character_numbers
            .iter()
            .map(|(k, v)| (k.to_string(), rational::format_rational(v)))
            .collect();
        st.serialize_field("chern_character_numbers", &ch)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ManifoldClassData {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum NumberOrString {
            Int(i64),
            Str(String),
        }
        impl NumberOrString {
            fn to_rational<E: serde::de::Error>(&self) -> Result<Rational, E> {
                match self {
                    NumberOrString::Int(n) => Ok(rational::rat_int(*n)),
                    NumberOrString::Str(s) => {
                        rational::parse_rational(s).map_err(E::custom)
                    }
                }
            }
        }
        #[derive(Deserialize)]
        struct Raw {
            name: String,
            l: u32,
            #[serde(default)]
            characteristic_numbers: BTreeMap<String, NumberOrString>,
            #[serde(default)]
            chern_character_numbers: BTreeMap<String, NumberOrString>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut characteristic_numbers = BTreeMap::new();
        for (k, v) in &raw.characteristic_numbers {
            let mono = ClassMonomial::parse(k).map_err(D::Error::custom)?;
            let variable = if k.trim_start().starts_with('c') {
                ClassVariable::Chern
            } else {
                ClassVariable::Pontryagin
            };
            characteristic_numbers.insert(mono.format(variable), v.to_rational()?);
        }
        let mut chern_character_numbers = BTreeMap::new();
        for (k, v) in &raw.chern_character_numbers {
            let degree: u32 = k
                .parse()
                .map_err(|_| D::Error::custom(format!("bad ch degree key {k:?}")))?;
            chern_character_numbers.insert(degree, v.to_rational()?);
        }
        Ok(ManifoldClassData {
            name: raw.name,
            l: raw.l,
            characteristic_numbers,
            chern_character_numbers,
        })
    }
}

/// One-variable generating function of the chosen kind, exact to `order`.
///
/// Coefficients come from the Bernoulli expansion of the hyperbolic
/// cotangent family, so this route is independent of the series-division
/// construction used on the thermodynamic side.
pub fn generating_series(kind: GenusKind, order: u32) -> PowerSeries {
    let b = bernoulli_numbers(order);
    let mut coeffs = vec![Rational::zero(); order as usize + 1];
    match kind {
        // (x/2)/tanh(x/2) = sum B_2k x^2k / (2k)!
        GenusKind::L => {
            for k in 0..=(order / 2) {
                coeffs[(2 * k) as usize] = &b[(2 * k) as usize] / factorial(2 * k);
            }
        }
        // (x/2)/sinh(x/2) = sum B_2k (2 - 4^k) x^2k / (4^k (2k)!)
        GenusKind::AHat => {
            for k in 0..=(order / 2) {
                let four_k = Rational::from_integer(num_bigint::BigInt::from(4u32).pow(k));
                let factor = (rat(2, 1) - &four_k) / (four_k * factorial(2 * k));
                coeffs[(2 * k) as usize] = &b[(2 * k) as usize] * factor;
            }
        }
        // x/(1 - e^{-x}) = 1 + x/2 + sum_{k>=1} B_2k x^2k / (2k)!
        GenusKind::Todd => {
            coeffs[0] = Rational::one();
            if order >= 1 {
                coeffs[1] = rat(1, 2);
            }
            for k in 1..=(order / 2) {
                coeffs[(2 * k) as usize] = &b[(2 * k) as usize] / factorial(2 * k);
            }
        }
        // cosh(x/2) = sum x^2k / (4^k (2k)!)
        GenusKind::CoshHalf => {
            for k in 0..=(order / 2) {
                let four_k = Rational::from_integer(num_bigint::BigInt::from(4u32).pow(k));
                coeffs[(2 * k) as usize] = (four_k * factorial(2 * k)).recip();
            }
        }
    }
    PowerSeries::from_coeffs(coeffs)
}

/// Residual of the factorization `L - AHat * cosh(x/2)` at the given order.
/// The contract is the identically zero series; returning the residual lets
/// callers display per-coefficient evidence.
pub fn verify_la_identity(order: u32) -> PowerSeries {
    let l = generating_series(GenusKind::L, order);
    let ahat = generating_series(GenusKind::AHat, order);
    let cosh = generating_series(GenusKind::CoshHalf, order);
    l.sub(&ahat.mul(&cosh))
}

/// Root-variable series expanded by [`multiplicative_sequence`]: the
/// classical normalizations, expressed in the convention's root variable
/// (`t = x^2` for Pontryagin kinds, `t = x` for Chern kinds).
fn sequence_root_series(kind: GenusKind, max_degree: u32) -> Vec<Rational> {
    match kind {
        // x/tanh(x) = sum B_2k 4^k x^2k / (2k)!  ->  t^k coefficient
        GenusKind::L => {
            let b = bernoulli_numbers(2 * max_degree);
            (0..=max_degree)
                .map(|k| {
                    let four_k = Rational::from_integer(num_bigint::BigInt::from(4u32).pow(k));
                    &b[(2 * k) as usize] * four_k / factorial(2 * k)
                })
                .collect()
        }
        GenusKind::AHat => {
            let halved = generating_series(GenusKind::AHat, 2 * max_degree);
            (0..=max_degree).map(|k| halved.coeff(2 * k)).collect()
        }
        GenusKind::CoshHalf => {
            let halved = generating_series(GenusKind::CoshHalf, 2 * max_degree);
            (0..=max_degree).map(|k| halved.coeff(2 * k)).collect()
        }
        GenusKind::Todd => {
            let todd = generating_series(GenusKind::Todd, max_degree);
            (0..=max_degree).map(|k| todd.coeff(k)).collect()
        }
    }
}

/// Multiplicative sequence `K_0 .. K_max_degree` of the chosen kind.
///
/// The product of the root function over `num_roots` formal roots is
/// expanded symmetrically and rewritten in the elementary symmetric basis;
/// `e_k` of the (squared, for Pontryagin kinds) roots becomes the class
/// variable of index `k`. Results are independent of `num_roots` once
/// `num_roots >= max_degree`.
pub fn multiplicative_sequence(
    kind: GenusKind,
    max_degree: u32,
    num_roots: u32,
) -> Result<Vec<ClassPolynomial>, GenusError> {
    let root = sequence_root_series(kind, max_degree);
    multiplicative_sequence_from_series(&root, kind.variable(), max_degree, num_roots)
}

/// Sequence expansion for an arbitrary root-variable series (constant term
/// first). Exposed so identities between sequences of series products can be
/// checked directly.
pub fn multiplicative_sequence_from_series(
    root_series: &[Rational],
    variable: ClassVariable,
    max_degree: u32,
    num_roots: u32,
) -> Result<Vec<ClassPolynomial>, GenusError> {
    if num_roots < max_degree {
        return Err(GenusError::InsufficientRoots {
            needed: max_degree,
            got: num_roots,
        });
    }
    let layers =
        symmetric::rewrite_in_elementary_basis(root_series, num_roots as usize, max_degree);
    Ok(layers
        .into_iter()
        .enumerate()
        .map(|(d, layer)| {
            let terms = layer
                .into_iter()
                .map(|(mu, c)| (ClassMonomial::new(mu), c))
                .collect();
            ClassPolynomial {
                degree: d as u32,
                variable,
                terms,
            }
        })
        .collect())
}

/// Default root count for a sequence expansion: two beyond the degree.
pub fn default_num_roots(max_degree: u32) -> u32 {
    max_degree + 2
}

/// Pairs the degree-`data.l` polynomial with the supplied characteristic
/// numbers. Monomials of other weighted degrees never enter: against the
/// fundamental class only the top-degree polynomial pairs nonzero.
pub fn evaluate_genus(
    polys: &[ClassPolynomial],
    data: &ManifoldClassData,
) -> Result<Rational, GenusError> {
    let top = polys
        .iter()
        .find(|p| p.degree == data.l)
        .ok_or(GenusError::MissingDegree(data.l))?;
    top.evaluate(&data.characteristic_numbers)
}

/// Twisted signature index `2^l * sum_d ch_d * L_{l-d}[M]`.
///
/// `l` is taken from the data verbatim. The prefactor `2^l` reads `l` as the
/// half real dimension when the supplied degree units make the top class
/// polynomial the degree-`l` one, as in the bundled examples; callers whose
/// convention counts complex dimension should supply `l` accordingly, since
/// the two readings differ by a power of two.
///
/// Each Chern-character component of degree `d` multiplies the evaluation of
/// the complementary L polynomial; the degree-0 polynomial is the constant 1,
/// so a bundle with only a rank component `r` yields `r * 2^l * L_l[M]`.
pub fn signature_index(data: &ManifoldClassData) -> Result<Rational, GenusError> {
    let polys = multiplicative_sequence(GenusKind::L, data.l, default_num_roots(data.l))?;
    let mut acc = Rational::zero();
    for (&degree, ch) in &data.chern_character_numbers {
        if ch.is_zero() || degree > data.l {
            continue;
        }
        let complement = data.l - degree;
        let poly = polys
            .iter()
            .find(|p| p.degree == complement)
            .ok_or(GenusError::MissingDegree(complement))?;
        acc += ch * poly.evaluate(&data.characteristic_numbers)?;
    }
    let two_l = Rational::from_integer(num_bigint::BigInt::from(2u32).pow(data.l));
    Ok(two_l * acc)
}

/// First Pontryagin number from Chern numbers: `p1 = c1^2 - 2 c2`.
pub fn pontryagin_from_chern(
    chern_numbers: &BTreeMap<String, Rational>,
) -> Result<BTreeMap<String, Rational>, GenusError> {
    let c1_sq = chern_numbers
        .get("c1^2")
        .ok_or_else(|| GenusError::MissingCharacteristicNumber("c1^2".to_string()))?;
    let c2 = chern_numbers
        .get("c2")
        .ok_or_else(|| GenusError::MissingCharacteristicNumber("c2".to_string()))?;
    let mut out = BTreeMap::new();
    out.insert("p1".to_string(), c1_sq - rat(2, 1) * c2);
    Ok(out)
}
