//! Slow, independently written reference implementations.
//!
//! Nothing here calls into `slr-core`. The Green's tensor is transcribed in a
//! different algebraic arrangement, lattice sums are done as explicit
//! site-pair double sums on a ring, and the pump-probe chain is integrated in
//! the time domain with RK4.

use num_complex::Complex64 as C;

pub const HBAR_C: f64 = 197.3269804;
pub const HBAR: f64 = 0.6582119569;

/// G(r) written as e^{ikr}/(4πr)·[(1 + (ikr − 1)/(kr)²)·I + (3 − 3ikr − (kr)²)/(kr)²·r̂r̂].
pub fn green_tensor(r: [f64; 3], k: f64) -> [[C; 3]; 3] {
    let d = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    let kr = k * d;
    let ikr = C::new(0.0, kr);
    let pre = C::new(0.0, kr).exp() / (4.0 * std::f64::consts::PI * d);
    let a = C::new(1.0, 0.0) + (ikr - 1.0) / (kr * kr);
    let b = (C::new(3.0, 0.0) - 3.0 * ikr - kr * kr) / (kr * kr);
    let mut g = [[C::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            g[i][j] = pre * (a * delta + b * (r[i] / d) * (r[j] / d));
        }
    }
    g
}

pub fn project(u: [f64; 3], g: &[[C; 3]; 3], v: [f64; 3]) -> C {
    let mut s = C::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            s += u[i] * g[i][j] * v[j];
        }
    }
    s
}

/// Geometry of a ring of `sites_m + 1` emitters used for brute-force sums.
#[derive(Clone, Copy, Debug)]
pub struct Ring {
    pub sites_m: usize,
    pub spacing: f64,
    pub axis: [f64; 3],
}

impl Ring {
    fn count(&self) -> usize {
        self.sites_m + 1
    }

    /// Minimum-image separation index of sites j and j' (in −M/2..=M/2).
    fn separation(&self, j: usize, jp: usize) -> i64 {
        let n = self.count() as i64;
        let half = (self.sites_m / 2) as i64;
        (j as i64 - jp as i64 + half).rem_euclid(n) - half
    }
}

/// Averaged double sum (1/N) Σ_j Σ_{j'} e^{−iq·d} u·G(d)·v over all ordered
/// site pairs, d = separation vector plus `offset`. Pairs with zero
/// displacement are skipped.
pub fn ring_double_sum(
    ring: Ring,
    u: [f64; 3],
    v: [f64; 3],
    offset: [f64; 3],
    q: f64,
    k: f64,
) -> C {
    let n = ring.count();
    let mut total = C::new(0.0, 0.0);
    for j in 0..n {
        for jp in 0..n {
            let s = ring.separation(j, jp) as f64 * ring.spacing;
            let d = [
                s * ring.axis[0] + offset[0],
                s * ring.axis[1] + offset[1],
                s * ring.axis[2] + offset[2],
            ];
            let len = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            if len == 0.0 {
                continue;
            }
            let along = d[0] * ring.axis[0] + d[1] * ring.axis[1] + d[2] * ring.axis[2];
            let phase = C::new(0.0, -q * along).exp();
            total += phase * project(u, &green_tensor(d, k), v);
        }
    }
    total / n as f64
}

/// Dressing prefactor 3π Γ ratio ħc ω²/ω₀³ applied to a raw Green's sum.
pub fn dressing_prefactor(gamma0: f64, omega0: f64, ratio: f64, omega: f64) -> f64 {
    3.0 * std::f64::consts::PI * gamma0 * ratio * HBAR_C * omega * omega / omega0.powi(3)
}

/// Gaussian envelope pulse, field amplitude η·exp(−(t−delay)²/(2τ²))·e^{−iω_c t/ħ}.
#[derive(Clone, Copy, Debug)]
pub struct Pulse {
    pub center: f64,
    pub tau: f64,
    pub eta: f64,
    pub delay: f64,
}

impl Pulse {
    fn envelope(&self, t: f64) -> f64 {
        let x = (t - self.delay) / self.tau;
        self.eta * (-0.5 * x * x).exp()
    }
}

/// Two-transition ring (levels 1, 2, 3) driven by pump on 1→2 and probe on
/// 2→3. Lattice couplings are frozen at the pulse carriers (Markov).
#[derive(Clone, Debug)]
pub struct ChainOde {
    pub ring: Ring,
    pub orientation: [f64; 3],
    pub omega12: f64,
    pub gamma12: f64,
    pub omega23: f64,
    pub gamma23: f64,
    pub p_inv0: f64,
    pub pump: Pulse,
    pub probe: Pulse,
    pub eps_reg: f64,
}

/// Time traces at site 0, rotating frames removed from the coherences.
pub struct ChainTrace {
    pub times: Vec<f64>,
    pub sigma12: Vec<C>,
    pub population: Vec<f64>,
    pub sigma23: Vec<C>,
    pub probe_center: f64,
}

impl ChainOde {
    /// Coupling J(d) in eV between sites separated by d spacings.
    pub fn coupling(&self, d: i64, omega_t: f64, gamma_t: f64, carrier: f64) -> C {
        let s = d as f64 * self.ring.spacing;
        let r = [s * self.ring.axis[0], s * self.ring.axis[1], s * self.ring.axis[2]];
        let g = green_tensor(r, carrier / HBAR_C);
        dressing_prefactor(gamma_t, omega_t, 1.0, carrier) * project(self.orientation, &g, self.orientation)
    }

    /// Lattice sum at q = 0 implied by the frozen couplings.
    pub fn markov_sum(&self, omega_t: f64, gamma_t: f64, carrier: f64) -> C {
        let half = (self.ring.sites_m / 2) as i64;
        (1..=half)
            .map(|d| self.coupling(d, omega_t, gamma_t, carrier) + self.coupling(-d, omega_t, gamma_t, carrier))
            .sum()
    }

    pub fn integrate(&self, t0: f64, t1: f64, dt: f64) -> ChainTrace {
        let n = self.ring.count();
        let half = (self.ring.sites_m / 2) as i64;
        let mut j12 = vec![vec![C::new(0.0, 0.0); n]; n];
        let mut j23 = vec![vec![C::new(0.0, 0.0); n]; n];
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let d = self.ring.separation(a, b);
                debug_assert!(d.abs() <= half);
                j12[a][b] = self.coupling(d, self.omega12, self.gamma12, self.pump.center);
                j23[a][b] = self.coupling(d, self.omega23, self.gamma23, self.probe.center);
            }
        }
        let h = HBAR;
        let rhs = |t: f64, y: &[C]| -> Vec<C> {
            let (s12, rest) = y.split_at(n);
            let (pop, s23) = rest.split_at(n);
            let fp = self.pump.envelope(t);
            let fq = self.probe.envelope(t);
            let mut out = vec![C::new(0.0, 0.0); 3 * n];
            for a in 0..n {
                let mut c12 = C::new(0.0, 0.0);
                let mut c23 = C::new(0.0, 0.0);
                for b in 0..n {
                    c12 += j12[a][b] * s12[b];
                    c23 += j23[a][b] * s23[b];
                }
                let det12 = C::new(self.gamma12 / 2.0, self.omega12 - self.pump.center);
                out[a] = (-det12 * s12[a] - C::i() * self.p_inv0 * c12) / h - self.p_inv0 * fp;
                let drive = 2.0 * (fp * s12[a].conj()).re;
                let loss = self.gamma12 * s12[a].norm_sqr() + 2.0 * (s12[a].conj() * c12).im;
                out[n + a] = C::new(drive - loss / h - self.eps_reg / h * pop[a].re, 0.0);
                let det23 = C::new(self.gamma23 / 2.0, self.omega23 - self.probe.center);
                out[2 * n + a] = (-det23 * s23[a] + C::i() * c23) / h + pop[a].re * fq;
            }
            out
        };
        let steps = ((t1 - t0) / dt).round() as usize;
        let mut y = vec![C::new(0.0, 0.0); 3 * n];
        let mut trace = ChainTrace {
            times: Vec::with_capacity(steps + 1),
            sigma12: Vec::with_capacity(steps + 1),
            population: Vec::with_capacity(steps + 1),
            sigma23: Vec::with_capacity(steps + 1),
            probe_center: self.probe.center,
        };
        let record = |tr: &mut ChainTrace, t: f64, y: &[C]| {
            tr.times.push(t);
            tr.sigma12.push(y[0]);
            tr.population.push(y[n].re);
            tr.sigma23.push(y[2 * n]);
        };
        record(&mut trace, t0, &y);
        for s in 0..steps {
            let t = t0 + s as f64 * dt;
            let k1 = rhs(t, &y);
            let y2: Vec<C> = y.iter().zip(&k1).map(|(a, b)| a + b * (dt / 2.0)).collect();
            let k2 = rhs(t + dt / 2.0, &y2);
            let y3: Vec<C> = y.iter().zip(&k2).map(|(a, b)| a + b * (dt / 2.0)).collect();
            let k3 = rhs(t + dt / 2.0, &y3);
            let y4: Vec<C> = y.iter().zip(&k3).map(|(a, b)| a + b * dt).collect();
            let k4 = rhs(t + dt, &y4);
            for i in 0..y.len() {
                y[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
            }
            record(&mut trace, t0 + (s + 1) as f64 * dt, &y);
        }
        trace
    }
}

impl ChainTrace {
    /// ∫ σ²³(t) e^{iωt/ħ} dt by the trapezoid rule, lab frame restored.
    pub fn sigma23_spectrum(&self, omegas: &[f64]) -> Vec<C> {
        omegas
            .iter()
            .map(|&w| {
                let det = (w - self.probe_center) / HBAR;
                let vals: Vec<C> = self
                    .times
                    .iter()
                    .zip(&self.sigma23)
                    .map(|(&t, &s)| s * C::new(0.0, det * t).exp())
                    .collect();
                let dt = self.times[1] - self.times[0];
                let inner: C = vals[1..vals.len() - 1].iter().sum();
                (inner + (vals[0] + vals[vals.len() - 1]) * 0.5) * dt
            })
            .collect()
    }
}

/// Three-point Gauss–Legendre in cos θ times an eight-point rule in φ; exact
/// for polynomials of degree ≤ 5 on the sphere.
pub fn sphere_average(f: impl Fn([f64; 3]) -> f64) -> f64 {
    let nodes = [-(0.6f64).sqrt(), 0.0, (0.6f64).sqrt()];
    let weights = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    let nphi = 8;
    let mut acc = 0.0;
    for (c, w) in nodes.iter().zip(weights) {
        let s = (1.0 - c * c).sqrt();
        for m in 0..nphi {
            let phi = 2.0 * std::f64::consts::PI * m as f64 / nphi as f64;
            acc += w * f([s * phi.cos(), s * phi.sin(), *c]) / nphi as f64;
        }
    }
    acc / 2.0
}
