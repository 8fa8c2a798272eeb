use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::error::{KernelError, Result};
use super::field::{Field, FieldElement};
use super::is_identifier;

/// Exponent vector, one entry per ring variable. Ordered lexicographically.
pub type Monomial = Vec<u32>;

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    field: Field,
    names: Vec<String>,
}

/// Multivariate polynomial ring over a finite field with lexicographic
/// monomial order. Equality is structural; arithmetic requires
/// [`PolyRing::is_same`].
#[derive(Clone, PartialEq, Eq)]
pub struct PolyRing(Arc<RingData>);

/// Builds `field[names...]` and returns it with its generators.
pub fn polynomial_ring(field: &Field, names: &[&str]) -> Result<(PolyRing, Vec<Polynomial>)> {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    let ring = PolyRing::new(field, names)?;
    let gens = (0..ring.nvars()).map(|i| ring.generator(i)).collect();
    Ok((ring, gens))
}

impl PolyRing {
    pub fn new(field: &Field, names: Vec<String>) -> Result<PolyRing> {
        for (i, name) in names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(KernelError::InvalidIdentifier(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(KernelError::DuplicateVariable(name.clone()));
            }
        }
        Ok(PolyRing(Arc::new(RingData {
            field: field.clone(),
            names,
        })))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_same(&self, other: &PolyRing) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> Polynomial {
        self.constant(self.field().one())
            .expect("one lies in the coefficient field")
    }

    /// The `i`-th variable.
    pub fn generator(&self, i: usize) -> Polynomial {
        let mut exps = vec![0; self.nvars()];
        exps[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, self.field().one());
        Polynomial {
            ring: self.clone(),
            terms,
        }
    }

    pub fn constant(&self, c: FieldElement) -> Result<Polynomial> {
        self.from_terms([(vec![0; self.nvars()], c)])
    }

    pub fn from_integer(&self, value: &BigInt) -> Polynomial {
        self.constant(self.field().from_integer(value))
            .expect("integer image lies in the coefficient field")
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs. Repeated
    /// monomials are summed and zero coefficients dropped.
    pub fn from_terms<I>(&self, terms: I) -> Result<Polynomial>
    where
        I: IntoIterator<Item = (Monomial, FieldElement)>,
    {
        let mut out = self.zero();
        for (exps, coeff) in terms {
            if exps.len() != self.nvars() {
                return Err(KernelError::InvalidInput(format!(
                    "exponent vector of length {} in a ring with {} variables",
                    exps.len(),
                    self.nvars()
                )));
            }
            if !coeff.parent().is_same(self.field()) {
                return Err(KernelError::ParentMismatch("fields"));
            }
            out.add_term(exps, coeff);
        }
        Ok(out)
    }
}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let noun = if self.nvars() == 1 { "variable" } else { "variables" };
        write!(f, "Multivariate polynomial ring in {} {noun}", self.nvars())?;
        if self.nvars() > 0 {
            write!(f, " {}", self.names().join(", "))?;
        }
        write!(f, " over {}", self.field())
    }
}

/// Sparse polynomial: nonzero coefficients keyed by exponent vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: PolyRing,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl Polynomial {
    pub fn parent(&self) -> &PolyRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of their exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> FieldElement {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.ring.field().zero())
    }

    /// Total degree, `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, exps: Monomial, coeff: FieldElement) {
        use std::collections::btree_map::Entry;
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff).expect("coefficients share the field");
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_parent(&self, other: &Polynomial) -> Result<()> {
        if self.ring.is_same(&other.ring) {
            Ok(())
        } else {
            Err(KernelError::ParentMismatch("rings"))
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_parent(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_parent(other)?;
        let mut out = self.ring.zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea
                    .iter()
                    .zip(eb)
                    .map(|(a, b)| a.checked_add(*b))
                    .collect::<Option<Monomial>>()
                    .ok_or_else(|| KernelError::InvalidInput("exponent overflow".into()))?;
                out.add_term(exps, ca.mul(cb)?);
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `c`, which must lie in the ring's field.
    pub fn scale(&self, c: &FieldElement) -> Result<Polynomial> {
        if !c.parent().is_same(self.ring.field()) {
            return Err(KernelError::ParentMismatch("fields"));
        }
        let mut out = self.ring.zero();
        for (e, coeff) in &self.terms {
            out.add_term(e.clone(), coeff.mul(c)?);
        }
        Ok(out)
    }

    /// `self^k` by repeated squaring; `p^0 = 1`.
    pub fn pow(&self, mut k: u64) -> Result<Polynomial> {
        let mut result = self.ring.one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Evaluates at a point of `field^nvars`.
    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.ring.nvars() {
            return Err(KernelError::InvalidInput(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.ring.nvars()
            )));
        }
        let mut acc = self.ring.field().zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(exps) {
                term = term.mul(&x.pow(&BigInt::from(e))?)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Leading term first, e.g. `(3*o + 2)*x^2*y + o*y + 5`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let single = self.terms.len() == 1;
        for (i, (exps, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let monomial: Vec<String> = self
                .ring
                .names()
                .iter()
                .zip(exps)
                .filter(|(_, &e)| e > 0)
                .map(|(name, &e)| {
                    if e == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let compound = c.term_count() > 1;
            if monomial.is_empty() {
                if compound && !single {
                    write!(f, "({c})")?;
                } else {
                    write!(f, "{c}")?;
                }
                continue;
            }
            if !c.is_one() {
                if compound {
                    write!(f, "({c})*")?;
                } else {
                    write!(f, "{c}*")?;
                }
            }
            f.write_str(&monomial.join("*"))?;
        }
        Ok(())
    }
}
