use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{ExactError, FieldElement, NumberFieldSpec, Rational};

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse multivariate polynomial over a number field.
#[derive(Clone, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    field: Arc<NumberFieldSpec>,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl MultiPoly {
    pub fn zero(field: &Arc<NumberFieldSpec>, nvars: usize) -> Self {
        MultiPoly { nvars, field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(c: FieldElement, nvars: usize) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(field: &Arc<NumberFieldSpec>, nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(Monomial::var(nvars, i), FieldElement::one(field));
        p
    }

    /// Builds from explicit terms; repeated monomials are summed.
    pub fn from_terms(
        field: &Arc<NumberFieldSpec>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> Result<Self, ExactError> {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(ExactError::ArityMismatch(e.len(), nvars));
            }
            if !NumberFieldSpec::same(c.field(), field) {
                return Err(ExactError::FieldMismatch);
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> &Arc<NumberFieldSpec> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElement {
        self.terms
            .get(&Monomial(e.to_vec()))
            .cloned()
            .unwrap_or_else(|| FieldElement::zero(&self.field))
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn compatible(&self, o: &Self) -> Result<(), ExactError> {
        if self.nvars != o.nvars {
            return Err(ExactError::ArityMismatch(self.nvars, o.nvars));
        }
        if !NumberFieldSpec::same(&self.field, &o.field) {
            return Err(ExactError::FieldMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ExactError> {
        self.compatible(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, ExactError> {
        self.checked_add(&o.neg())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ExactError> {
        self.compatible(o)?;
        Ok(self.mul_bounded(o, None))
    }

    /// Product keeping only monomials of total degree ≤ `max_deg`.
    pub fn mul_truncated(&self, o: &Self, max_deg: u32) -> Result<Self, ExactError> {
        self.compatible(o)?;
        Ok(self.mul_bounded(o, Some(max_deg)))
    }

    fn mul_bounded(&self, o: &Self, max_deg: Option<u32>) -> Self {
        let mut r = Self::zero(&self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                if max_deg.is_some_and(|d| m1.degree() + m2.degree() > d) {
                    continue;
                }
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut r = Self::zero(&self.field, self.nvars);
        for (m, x) in &self.terms {
            r.add_term(m.clone(), x * c);
        }
        r
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let mut r = Self::zero(&self.field, self.nvars);
        for (m, x) in &self.terms {
            r.add_term(m.clone(), x.scale(q));
        }
        r
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut r = Self::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            r.add_term(m2, c.scale(&Rational::from_integer(e.into())));
        }
        r
    }

    pub fn truncate(&self, max_deg: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_part(&self, deg: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn eval_complex(&self, x: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter().zip(x).fold(c.to_complex(), |acc, (&e, &xi)| acc * xi.powu(e))
            })
            .sum()
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
                    .collect();
                if vars.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl std::ops::$tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            /// Panics on field or arity mismatch; see the `checked_*` form.
            fn $m(self, o: &MultiPoly) -> MultiPoly {
                self.$checked(o).expect("incompatible polynomials")
            }
        }
    };
}
forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
