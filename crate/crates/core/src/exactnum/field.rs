use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{linalg, parse_rational, rational_to_string, ExactError, Rational};

/// A commutative Q-algebra of finite dimension given by structure constants
/// on a basis whose first element is the identity, together with a complex
/// embedding of each basis element.
#[derive(Debug, Clone)]
pub struct NumberFieldSpec {
    pub name: String,
    pub basis: Vec<String>,
    /// `table[i][j]` holds the coordinates of `e_i * e_j`.
    table: Vec<Vec<Vec<Rational>>>,
    embedding: Vec<Complex64>,
}

impl PartialEq for NumberFieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.basis.len() == other.basis.len() && self.table == other.table
    }
}

#[derive(Serialize, Deserialize)]
struct FieldFile {
    #[serde(default)]
    name: String,
    dim: usize,
    basis_names: Vec<String>,
    mul_table: Vec<Vec<Vec<String>>>,
    embedding: Vec<[f64; 2]>,
}

fn unit(d: usize, i: usize) -> Vec<Rational> {
    (0..d)
        .map(|j| if i == j { Rational::one() } else { Rational::zero() })
        .collect()
}

impl NumberFieldSpec {
    /// Validates identity, commutativity, associativity and the embedding
    /// before accepting the table.
    pub fn new(
        name: &str,
        basis: Vec<String>,
        table: Vec<Vec<Vec<Rational>>>,
        embedding: Vec<Complex64>,
    ) -> Result<Arc<Self>, ExactError> {
        let d = basis.len();
        let bad = |m: String| Err(ExactError::MalformedField(m));
        if d == 0 {
            return bad("empty basis".into());
        }
        if table.len() != d
            || table.iter().any(|r| r.len() != d || r.iter().any(|c| c.len() != d))
        {
            return bad(format!("multiplication table must be {d}x{d}x{d}"));
        }
        if embedding.len() != d {
            return bad("embedding length differs from basis".into());
        }
        for j in 0..d {
            if table[0][j] != unit(d, j) {
                return bad(format!("first basis element is not the identity (column {j})"));
            }
        }
        for i in 0..d {
            for j in 0..d {
                if table[i][j] != table[j][i] {
                    return bad(format!("table is not commutative at ({i},{j})"));
                }
            }
        }
        let spec = NumberFieldSpec { name: name.to_string(), basis, table, embedding };
        for i in 0..d {
            for j in 0..d {
                let eij = &spec.table[i][j];
                for k in 0..d {
                    let lhs = spec.mul_coords(eij, &unit(d, k));
                    let rhs = spec.mul_coords(&unit(d, i), &spec.table[j][k]);
                    if lhs != rhs {
                        return bad(format!("table is not associative at ({i},{j},{k})"));
                    }
                }
                let prod = spec.embedding[i] * spec.embedding[j];
                let img: Complex64 = eij
                    .iter()
                    .zip(&spec.embedding)
                    .map(|(c, e)| e * c.to_f64().unwrap_or(f64::NAN))
                    .sum();
                if !((prod - img).norm() <= 1e-9 * (1.0 + prod.norm())) {
                    return bad(format!("embedding does not respect e{i}*e{j}"));
                }
            }
        }
        Ok(Arc::new(spec))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn embedding(&self) -> &[Complex64] {
        &self.embedding
    }

    fn mul_coords(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let d = self.dim();
        let mut out = vec![Rational::zero(); d];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let s = ai * bj;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_zero() {
                        *o += &s * t;
                    }
                }
            }
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Arc<Self>, ExactError> {
        let f: FieldFile = serde_json::from_str(text)
            .map_err(|e| ExactError::MalformedField(e.to_string()))?;
        if f.dim != f.basis_names.len() {
            return Err(ExactError::MalformedField("dim differs from number of basis names".into()));
        }
        let table = f
            .mul_table
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| c.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let emb = f.embedding.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Self::new(&f.name, f.basis_names, table, emb)
    }

    pub fn to_json(&self) -> String {
        let f = FieldFile {
            name: self.name.clone(),
            dim: self.dim(),
            basis_names: self.basis.clone(),
            mul_table: self
                .table
                .iter()
                .map(|r| r.iter().map(|c| c.iter().map(rational_to_string).collect()).collect())
                .collect(),
            embedding: self.embedding.iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_string_pretty(&f).expect("field serialises")
    }

    /// The rational numbers.
    pub fn rationals() -> Arc<Self> {
        static F: OnceLock<Arc<NumberFieldSpec>> = OnceLock::new();
        F.get_or_init(|| {
            Self::new("Q", vec!["1".into()], vec![vec![unit(1, 0)]], vec![Complex64::new(1.0, 0.0)])
                .expect("Q is valid")
        })
        .clone()
    }

    /// Q(i) on the basis {1, i}.
    pub fn gaussian() -> Arc<Self> {
        static F: OnceLock<Arc<NumberFieldSpec>> = OnceLock::new();
        F.get_or_init(|| {
            let q = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x.into())).collect();
            let table = vec![vec![q(&[1, 0]), q(&[0, 1])], vec![q(&[0, 1]), q(&[-1, 0])]];
            Self::new(
                "Q(i)",
                vec!["1".into(), "i".into()],
                table,
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
            )
            .expect("Q(i) is valid")
        })
        .clone()
    }

    /// Q(i, sqrt 2) on the basis {1, i, r, i r} with r = sqrt 2.
    pub fn gaussian_sqrt2() -> Arc<Self> {
        static F: OnceLock<Arc<NumberFieldSpec>> = OnceLock::new();
        F.get_or_init(|| {
            // basis index = a + 2b for i^a r^b
            let mut table = vec![vec![vec![Rational::zero(); 4]; 4]; 4];
            for x in 0..4usize {
                for y in 0..4usize {
                    let (a, b) = (x % 2 + y % 2, x / 2 + y / 2);
                    let mut coef = 1i64;
                    if a == 2 {
                        coef = -coef;
                    }
                    if b == 2 {
                        coef *= 2;
                    }
                    table[x][y][(a % 2) + 2 * (b % 2)] = Rational::from_integer(coef.into());
                }
            }
            let r2 = 2f64.sqrt();
            Self::new(
                "Q(i,sqrt2)",
                vec!["1".into(), "i".into(), "r".into(), "i*r".into()],
                table,
                vec![
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 1.0),
                    Complex64::new(r2, 0.0),
                    Complex64::new(0.0, r2),
                ],
            )
            .expect("Q(i,sqrt2) is valid")
        })
        .clone()
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// Element of a [`NumberFieldSpec`], stored as rational coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberFieldSpec>,
    coords: Vec<Rational>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        NumberFieldSpec::same(&self.field, &other.field) && self.coords == other.coords
    }
}
impl Eq for FieldElement {}

impl FieldElement {
    pub fn zero(field: &Arc<NumberFieldSpec>) -> Self {
        FieldElement { field: field.clone(), coords: vec![Rational::zero(); field.dim()] }
    }

    pub fn one(field: &Arc<NumberFieldSpec>) -> Self {
        Self::basis(field, 0)
    }

    pub fn basis(field: &Arc<NumberFieldSpec>, i: usize) -> Self {
        FieldElement { field: field.clone(), coords: unit(field.dim(), i) }
    }

    pub fn from_rational(field: &Arc<NumberFieldSpec>, r: Rational) -> Self {
        let mut e = Self::zero(field);
        e.coords[0] = r;
        e
    }

    pub fn from_int(field: &Arc<NumberFieldSpec>, n: i64) -> Self {
        Self::from_rational(field, Rational::from_integer(n.into()))
    }

    pub fn from_coords(
        field: &Arc<NumberFieldSpec>,
        coords: Vec<Rational>,
    ) -> Result<Self, ExactError> {
        if coords.len() != field.dim() {
            return Err(ExactError::MalformedField(format!(
                "element has {} coordinates, field dimension is {}",
                coords.len(),
                field.dim()
            )));
        }
        Ok(FieldElement { field: field.clone(), coords })
    }

    /// Parses a list of `p/q` coordinate strings.
    pub fn parse(field: &Arc<NumberFieldSpec>, coords: &[String]) -> Result<Self, ExactError> {
        let c = coords.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
        Self::from_coords(field, c)
    }

    pub fn coords_strings(&self) -> Vec<String> {
        self.coords.iter().map(rational_to_string).collect()
    }

    pub fn field(&self) -> &Arc<NumberFieldSpec> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    fn check(&self, o: &Self) -> Result<(), ExactError> {
        if NumberFieldSpec::same(&self.field, &o.field) {
            Ok(())
        } else {
            Err(ExactError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ExactError> {
        self.check(o)?;
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect();
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, ExactError> {
        self.check(o)?;
        let coords = self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect();
        Ok(FieldElement { field: self.field.clone(), coords })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ExactError> {
        self.check(o)?;
        Ok(FieldElement { field: self.field.clone(), coords: self.field.mul_coords(&self.coords, &o.coords) })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * r).collect() }
    }

    /// Multiplicative inverse, by solving the linear system of
    /// multiplication by `self`.
    pub fn inverse(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let d = self.field.dim();
        let cols: Vec<Vec<Rational>> =
            (0..d).map(|j| self.field.mul_coords(&self.coords, &unit(d, j))).collect();
        let a: Vec<Vec<Rational>> =
            (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
        let y = linalg::solve(&a, &unit(d, 0))
            .ok_or_else(|| ExactError::MalformedField("algebra has zero divisors".into()))?;
        Ok(FieldElement { field: self.field.clone(), coords: y })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ExactError> {
        self.checked_mul(&o.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, ExactError> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one(&self.field);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        Ok(acc)
    }

    /// Image under the stored complex embedding.
    pub fn to_complex(&self) -> Complex64 {
        self.coords
            .iter()
            .zip(self.field.embedding())
            .map(|(c, e)| e * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// `Some(r)` when the element lies in the prime field.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| &self.coords[0])
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.coords.iter().zip(&self.field.basis) {
            if c.is_zero() {
                continue;
            }
            let s = rational_to_string(&c.abs());
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let sep = if first { "" } else { " " };
            let body = if name == "1" {
                s
            } else if c.abs().is_one() {
                name.clone()
            } else {
                format!("{s}*{name}")
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sep}{sign} {body}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            /// Panics if the operands live in different fields; use the
            /// `checked_*` form to get an error instead.
            fn $m(self, o: &FieldElement) -> FieldElement {
                self.$checked(o).expect("field mismatch")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$checked(&o).expect("field mismatch")
            }
        }
    };
}
forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(f: &Arc<NumberFieldSpec>, c: &[i64]) -> FieldElement {
        FieldElement::from_coords(f, c.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .unwrap()
    }

    #[test]
    fn gaussian_arithmetic() {
        let f = NumberFieldSpec::gaussian();
        let i = FieldElement::basis(&f, 1);
        assert_eq!(&i * &i, FieldElement::from_int(&f, -1));
        let z = el(&f, &[3, 4]);
        let inv = z.inverse().unwrap();
        assert!((&z * &inv).is_one());
        assert_eq!(inv.coords_strings(), vec!["3/25", "-4/25"]);
        assert_eq!(format!("{}", el(&f, &[-1, 2])), "-1 + 2*i");
    }

    #[test]
    fn sqrt2_field() {
        let f = NumberFieldSpec::gaussian_sqrt2();
        let r = FieldElement::basis(&f, 2);
        let ir = FieldElement::basis(&f, 3);
        assert_eq!(&r * &r, FieldElement::from_int(&f, 2));
        assert_eq!(&ir * &ir, FieldElement::from_int(&f, -2));
        let z = el(&f, &[1, 1, 1, 0]);
        assert!((&z * &z.inverse().unwrap()).is_one());
        assert!(((&z * &z).to_complex() - z.to_complex() * z.to_complex()).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_associative_table() {
        let q = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x.into())).collect::<Vec<_>>();
        // (a a) b = b b = a, but a (a b) = a a = b
        let table = vec![
            vec![q(&[1, 0, 0]), q(&[0, 1, 0]), q(&[0, 0, 1])],
            vec![q(&[0, 1, 0]), q(&[0, 0, 1]), q(&[0, 1, 0])],
            vec![q(&[0, 0, 1]), q(&[0, 1, 0]), q(&[0, 1, 0])],
        ];
        let emb = vec![Complex64::new(1.0, 0.0); 3];
        let err = NumberFieldSpec::new("bad", vec!["1".into(), "a".into(), "b".into()], table, emb);
        assert!(matches!(err, Err(ExactError::MalformedField(_))));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = FieldElement::from_int(&NumberFieldSpec::gaussian(), 1);
        let b = FieldElement::from_int(&NumberFieldSpec::rationals(), 1);
        assert_eq!(a.checked_add(&b), Err(ExactError::FieldMismatch));
    }

    #[test]
    fn json_round_trip() {
        let f = NumberFieldSpec::gaussian_sqrt2();
        let g = NumberFieldSpec::from_json(&f.to_json()).unwrap();
        assert!(NumberFieldSpec::same(&f, &g));
    }
}
