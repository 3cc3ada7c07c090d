//! Brute-force double-sum evaluation of the operator, written from the defining
//! formulas with plain `f64` arithmetic. Nothing here calls into `pqmkz`; it is
//! the independent side of the oracle checks.

#![allow(dead_code)]

pub struct Brute {
    p: f64,
    q: f64,
    nodes: usize,
}

impl Brute {
    pub fn new(p: f64, q: f64) -> Self {
        // Jackson weights after node J sum to (q/p)^J
        let nodes = ((1e-18f64).ln() / (q / p).ln()).ceil() as usize;
        Self { p, q, nodes }
    }

    pub fn int(&self, m: u32) -> f64 {
        (self.p.powi(m as i32) - self.q.powi(m as i32)) / (self.p - self.q)
    }

    fn ln_fact(&self, m: u32) -> f64 {
        (1..=m).map(|i| self.int(i).ln()).sum()
    }

    fn ln_binom(&self, a: u32, b: u32) -> f64 {
        self.ln_fact(a) - self.ln_fact(b) - self.ln_fact(a - b)
    }

    /// `(1 - x)^m_{p,q}`.
    pub fn one_minus(&self, x: f64, m: u32) -> f64 {
        (0..m)
            .map(|j| self.p.powi(j as i32) - self.q.powi(j as i32) * x)
            .product()
    }

    /// `m_{n,k}(x)` straight from the definition, binomial in log space.
    pub fn weight(&self, n: u32, k: u32, x: f64) -> f64 {
        let pref = (k * n + n * (n + 1) / 2) as f64 * self.p.ln();
        let tail = self.one_minus(x, n + 1);
        if x == 0.0 {
            return if k == 0 { tail * (-pref).exp() } else { 0.0 };
        }
        (self.ln_binom(n + k, k) - pref + k as f64 * x.ln()).exp() * tail
    }

    /// Log of the `t`-free factor of `b_{n,k}(qt)`.
    fn ln_kernel_const(&self, n: u32, k: u32) -> f64 {
        let pref = (k as f64 * (n as f64 - 1.0) + (n * (n - 1) / 2) as f64) * self.p.ln();
        self.ln_binom(n + k + 1, k) - pref
    }

    fn kernel_with(&self, ln_const: f64, n: u32, k: u32, t: f64) -> f64 {
        let qt = self.q * t;
        let power = if k == 0 { 0.0 } else { k as f64 * qt.ln() };
        (ln_const + power).exp() * self.one_minus(qt, n)
    }

    /// `b_{n,k}(qt)` straight from the definition.
    pub fn kernel(&self, n: u32, k: u32, t: f64) -> f64 {
        self.kernel_with(self.ln_kernel_const(n, k), n, k, t)
    }

    /// Fixed-length Jackson sum.
    pub fn jackson(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut sum = 0.0;
        for j in 0..self.nodes {
            let t = self.q.powi(j as i32) / self.p.powi(j as i32 + 1);
            sum += t * f(t);
        }
        (self.p - self.q) * sum
    }

    /// `Σ_{k=0}^{K} m_{n,k}(x) [n+1]/p^n (pq)^{-k} ∫ b_{n,k}(qt) f(t) d_{p,q}t`.
    pub fn operator(&self, f: impl Fn(f64) -> f64, n: u32, x: f64, last_k: u32) -> f64 {
        let front = self.int(n + 1) / self.p.powi(n as i32);
        let mut total = 0.0;
        for k in 0..=last_k {
            let w = self.weight(n, k, x);
            if w == 0.0 {
                continue;
            }
            let c = self.ln_kernel_const(n, k);
            let inner = self.jackson(|t| self.kernel_with(c, n, k, t) * f(t));
            total += w * front * (self.p * self.q).powi(-(k as i32)) * inner;
        }
        total
    }
}
