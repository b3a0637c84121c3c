//! Small dense-polynomial helpers backing the Gaussian closed forms.

/// Coefficients in ascending order: p(x) = c[0] + c[1] x + ...
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    /// p(x + c) by Taylor shift.
    pub fn shift(&self, c: f64) -> Poly {
        let n = self.0.len();
        let mut out = vec![0.0; n];
        for (k, &coef) in self.0.iter().enumerate() {
            // coef * (x + c)^k expanded via binomials
            let mut binom = 1.0f64;
            let mut cpow = 1.0f64;
            for j in (0..=k).rev() {
                out[j] += coef * binom * cpow;
                binom *= j as f64 / (k - j + 1) as f64;
                cpow *= c;
            }
        }
        Poly(out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    /// p(x) with x -> lambda * x.
    pub fn dilate(&self, lambda: f64) -> Poly {
        let mut pow = 1.0;
        Poly(
            self.0
                .iter()
                .map(|&c| {
                    let v = c * pow;
                    pow *= lambda;
                    v
                })
                .collect(),
        )
    }

    /// Real roots inside [lo, hi], by sign-change scan plus bisection.
    pub fn roots_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        sign_changes(|x| self.eval(x), lo, hi, 2048)
    }
}

/// ∫ x^k e^{-s x^2} dx over the whole line.
pub fn gaussian_moment(s: f64, k: usize) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let mut m = (std::f64::consts::PI / s).sqrt();
    let mut j = 0usize;
    while j + 2 <= k {
        // ∫ x^{j+2} e^{-sx^2} = (j+1)/(2s) ∫ x^j e^{-sx^2}
        m *= (j + 1) as f64 / (2.0 * s);
        j += 2;
    }
    m
}

/// ∫ p(x) e^{-s x^2} dx over the whole line.
pub fn gaussian_integral(p: &Poly, s: f64) -> f64 {
    p.0.iter().enumerate().map(|(k, &c)| c * gaussian_moment(s, k)).sum()
}

/// Locate sign changes of `f` on [lo, hi] by scanning `n` panels and bisecting
/// each bracketed change to ~1e-13 relative accuracy.
pub fn sign_changes<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::new();
    if hi <= lo {
        return out;
    }
    let h = (hi - lo) / n as f64;
    let mut xa = lo;
    let mut fa = f(xa);
    for i in 1..=n {
        let xb = lo + h * i as f64;
        let fb = f(xb);
        if fa == 0.0 {
            out.push(xa);
        } else if fa * fb < 0.0 {
            let (mut a, mut b) = (xa, xb);
            let mut va = fa;
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                let vm = f(m);
                if va * vm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    va = vm;
                }
                if b - a < 1e-13 * (1.0 + m.abs()) {
                    break;
                }
            }
            out.push(0.5 * (a + b));
        }
        xa = xb;
        fa = fb;
    }
    out
}
