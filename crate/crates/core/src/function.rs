//! Real functions on `[0, 1/p]` that the operator can act on.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Dense polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    /// `Π (t - root)`.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut coeffs = vec![1.0];
        for &root in roots {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= root * c;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![0.0; degree + 1];
        coeffs[degree] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Polynomial, b: f64) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                a * self.coeffs.get(i).copied().unwrap_or(0.0)
                    + b * other.coeffs.get(i).copied().unwrap_or(0.0)
            })
            .collect();
        Polynomial::new(coeffs)
    }
}

type Rule = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Polynomial(Polynomial),
    Rule(Rule),
}

/// An evaluable real function. Polynomials keep their exact coefficients so
/// the operator can use the closed-form moment path.
#[derive(Clone)]
pub struct Function1D {
    name: Option<String>,
    kind: Kind,
}

impl Function1D {
    pub fn polynomial(poly: Polynomial) -> Self {
        Self {
            name: None,
            kind: Kind::Polynomial(poly),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::polynomial(Polynomial::new(vec![c]))
    }

    /// `e_i(t) = t^i`.
    pub fn monomial(i: usize) -> Self {
        Self::polynomial(Polynomial::monomial(i)).named(alloc::format!("e{i}"))
    }

    pub fn from_roots(roots: &[f64]) -> Self {
        Self::polynomial(Polynomial::from_roots(roots))
    }

    /// Arbitrary rule; the operator integrates it numerically.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: None,
            kind: Kind::Rule(Arc::new(f)),
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match &self.kind {
            Kind::Polynomial(p) => Some(p),
            Kind::Rule(_) => None,
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Polynomial(p) => p.eval(t),
            Kind::Rule(f) => f(t),
        }
    }

    /// The four test polynomials used for the figure data, in order:
    /// `(x-2/3)(x-4/5)`, `(x-1/4)(x-2/3)(x-4/5)`,
    /// `(x-1/3)(x-2/3)(x-3/5)(x-4/5)` and `(x-1/3)(x-2/3)(x-3/5)(x-4/5)(x-5/7)`.
    pub fn figure_functions() -> [Function1D; 4] {
        [
            Self::from_roots(&[2.0 / 3.0, 4.0 / 5.0]).named("quadratic"),
            Self::from_roots(&[1.0 / 4.0, 2.0 / 3.0, 4.0 / 5.0]).named("cubic"),
            Self::from_roots(&[1.0 / 3.0, 2.0 / 3.0, 3.0 / 5.0, 4.0 / 5.0]).named("quartic"),
            Self::from_roots(&[1.0 / 3.0, 2.0 / 3.0, 3.0 / 5.0, 4.0 / 5.0, 5.0 / 7.0])
                .named("quintic"),
        ]
    }
}

impl fmt::Debug for Function1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("Function1D");
        s.field("name", &self.name);
        match &self.kind {
            Kind::Polynomial(p) => s.field("polynomial", &p.coeffs),
            Kind::Rule(_) => s.field("rule", &"<fn>"),
        };
        s.finish()
    }
}

impl From<Polynomial> for Function1D {
    fn from(poly: Polynomial) -> Self {
        Self::polynomial(poly)
    }
}
