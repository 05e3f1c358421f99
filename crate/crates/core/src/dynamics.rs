//! Synchronous heat-bath dynamics.
//!
//! Agent `i` feels the local field
//!
//! ```text
//! h_i = Σ_{j ∈ in(i)} S_j − α · S_i · |(1/N) Σ_j S_j|
//! ```
//!
//! (local majority pull minus global minority pull; the global sum runs over
//! all agents, `i` included). Each step computes every field from the
//! current configuration and then redraws all spins at once: `S_i = +1`
//! with probability `1 / (1 + exp(−2βh_i))`.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::network::Network;
use crate::rng::{stream, uniform};
use crate::{Error, Result};

/// Spins of all agents, each exactly `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinState(Vec<i8>);

impl SpinState {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("spins must be +1 or -1"));
        }
        Ok(Self(spins))
    }

    pub fn all_up(n: usize) -> Self {
        Self(alloc::vec![1; n])
    }

    /// I.i.d. uniform spins: `+1` iff a uniform variate is below 1/2.
    pub fn random<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self(
            (0..n)
                .map(|_| if uniform(rng) < 0.5 { 1 } else { -1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    /// `Σ_j S_j`.
    pub fn spin_sum(&self) -> i64 {
        spin_sum(&self.0)
    }

    /// `M = (1/N) Σ_j S_j`.
    pub fn magnetization(&self) -> f64 {
        self.spin_sum() as f64 / self.0.len() as f64
    }
}

/// Model parameters. Defaults: `alpha = 4`, `beta = 0.5`, 8192 steps,
/// tracked site 0, ordered-band threshold 0.5, no burn-in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub steps: usize,
    pub tracked_site: usize,
    pub threshold: f64,
    pub burn_in: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            alpha: 4.0,
            beta: 0.5,
            steps: 8192,
            tracked_site: 0,
            threshold: 0.5,
            burn_in: 0,
        }
    }
}

impl ModelParams {
    /// Checks the parameters against a network of `n` agents.
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidArgument(
                "alpha must be finite and non-negative",
            ));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidArgument(
                "beta must be finite and non-negative",
            ));
        }
        if self.steps == 0 {
            return Err(Error::InvalidArgument("steps must be at least 1"));
        }
        if self.tracked_site >= n {
            return Err(Error::InvalidArgument("tracked site out of range"));
        }
        if !(self.threshold > 0.0) {
            return Err(Error::InvalidArgument("threshold must be positive"));
        }
        if self.burn_in >= self.steps {
            return Err(Error::InvalidArgument(
                "burn-in must be shorter than the run",
            ));
        }
        Ok(())
    }
}

/// Recorded observables, one entry per recorded step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Local field of the tracked site.
    pub h: Vec<f64>,
    /// Magnetization.
    pub m: Vec<f64>,
    pub seed: u64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }
}

fn spin_sum(spins: &[i8]) -> i64 {
    spins.iter().map(|&s| i64::from(s)).sum()
}

#[inline]
fn field(spins: &[i8], net: &Network, i: usize, alpha: f64, abs_m: f64) -> f64 {
    let local: i64 = net
        .in_neighbors(i)
        .iter()
        .map(|&j| i64::from(spins[j]))
        .sum();
    local as f64 - alpha * f64::from(spins[i]) * abs_m
}

fn check_state(state: &SpinState, net: &Network) -> Result<()> {
    if state.len() != net.n() {
        return Err(Error::InvalidArgument(
            "state length differs from network size",
        ));
    }
    Ok(())
}

/// Local field `h_i` of agent `i`.
pub fn local_field(state: &SpinState, net: &Network, i: usize, alpha: f64) -> Result<f64> {
    check_state(state, net)?;
    if i >= net.n() {
        return Err(Error::InvalidArgument("vertex index out of range"));
    }
    let abs_m = state.magnetization().abs();
    Ok(field(state.spins(), net, i, alpha, abs_m))
}

/// Heat-bath probability of choosing `+1` under field `h`.
#[inline]
pub fn flip_probability(h: f64, beta: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-2.0 * beta * h))
}

/// Fields of every agent into `fields`, then fresh spins into `next`.
/// Consumes exactly `n` uniforms in ascending vertex order.
fn step_into<R: RngCore + ?Sized>(
    current: &[i8],
    next: &mut [i8],
    fields: &mut [f64],
    net: &Network,
    alpha: f64,
    beta: f64,
    rng: &mut R,
) {
    let n = current.len();
    let abs_m = (spin_sum(current).abs() as f64) / n as f64;
    for (i, h) in fields.iter_mut().enumerate() {
        *h = field(current, net, i, alpha, abs_m);
    }
    for (s, &h) in next.iter_mut().zip(fields.iter()) {
        *s = if uniform(rng) < flip_probability(h, beta) {
            1
        } else {
            -1
        };
    }
}

/// One synchronous update of all agents.
pub fn step_synchronous<R: RngCore + ?Sized>(
    state: &SpinState,
    net: &Network,
    params: &ModelParams,
    rng: &mut R,
) -> Result<SpinState> {
    check_state(state, net)?;
    let n = state.len();
    let mut next = alloc::vec![0i8; n];
    let mut fields = alloc::vec![0.0; n];
    step_into(
        state.spins(),
        &mut next,
        &mut fields,
        net,
        params.alpha,
        params.beta,
        rng,
    );
    Ok(SpinState(next))
}

/// Runs `params.steps` synchronous updates from an i.i.d. uniform start.
///
/// The stream is `rng::stream(seed)`: the first `n` uniforms draw the
/// initial spins, then each update consumes `n` more. After every update
/// with index `>= burn_in`, the tracked site's field and the magnetization
/// of the new configuration are recorded.
pub fn run(net: &Network, params: &ModelParams, seed: u64) -> Result<Trajectory> {
    let n = net.n();
    params.validate(n)?;
    let mut rng = stream(seed);
    let mut current = SpinState::random(n, &mut rng).0;
    let mut next = alloc::vec![0i8; n];
    let mut fields = alloc::vec![0.0; n];

    let recorded = params.steps - params.burn_in;
    let mut h = Vec::with_capacity(recorded);
    let mut m = Vec::with_capacity(recorded);
    for t in 0..params.steps {
        step_into(
            &current,
            &mut next,
            &mut fields,
            net,
            params.alpha,
            params.beta,
            &mut rng,
        );
        core::mem::swap(&mut current, &mut next);
        if t >= params.burn_in {
            let sum = spin_sum(&current);
            let abs_m = sum.abs() as f64 / n as f64;
            h.push(field(
                &current,
                net,
                params.tracked_site,
                params.alpha,
                abs_m,
            ));
            m.push(sum as f64 / n as f64);
        }
    }
    Ok(Trajectory { h, m, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{build_moore_torus, build_ring};
    use alloc::vec;

    #[test]
    fn local_field_closed_forms() {
        let ring = build_ring(4).unwrap();
        let up = SpinState::all_up(4);
        assert_eq!(local_field(&up, &ring, 0, 4.0).unwrap(), -2.0);

        let alt = SpinState::new(vec![1, -1, 1, -1]).unwrap();
        assert_eq!(local_field(&alt, &ring, 0, 4.0).unwrap(), -2.0);

        let moore = build_moore_torus(4, 4).unwrap();
        let up16 = SpinState::all_up(16);
        for i in 0..16 {
            assert_eq!(local_field(&up16, &moore, i, 4.0).unwrap(), 4.0);
        }
        assert!(local_field(&up16, &moore, 16, 4.0).is_err());
        assert!(local_field(&up, &moore, 0, 4.0).is_err());
    }

    #[test]
    fn heat_bath_probability() {
        assert_eq!(flip_probability(0.0, 0.5), 0.5);
        assert_eq!(flip_probability(3.0, 0.0), 0.5);
        // 1 / (1 + e^-2), evaluated independently
        assert!((flip_probability(2.0, 0.5) - 0.880_797_077_977_882_3).abs() < 1e-15);
        for &h in &[-7.5, -2.0, -0.25, 0.5, 3.0, 11.0] {
            let s = flip_probability(h, 0.5) + flip_probability(-h, 0.5);
            assert!((s - 1.0).abs() < 1e-15);
        }
        assert_eq!(flip_probability(1e6, 1.0), 1.0);
        assert_eq!(flip_probability(-1e6, 1.0), 0.0);
    }

    #[test]
    fn spins_must_be_unit() {
        assert!(SpinState::new(vec![1, 0, -1]).is_err());
    }

    #[test]
    fn params_validation() {
        let p = ModelParams::default();
        assert!(p.validate(16).is_ok());
        assert!(ModelParams {
            tracked_site: 16,
            ..p
        }
        .validate(16)
        .is_err());
        assert!(ModelParams { steps: 0, ..p }.validate(16).is_err());
        assert!(ModelParams { burn_in: 8192, ..p }.validate(16).is_err());
        assert!(ModelParams {
            threshold: 0.0,
            ..p
        }
        .validate(16)
        .is_err());
        assert!(ModelParams { alpha: -1.0, ..p }.validate(16).is_err());
        assert!(ModelParams {
            beta: f64::NAN,
            ..p
        }
        .validate(16)
        .is_err());
    }

    #[test]
    fn step_is_deterministic() {
        let net = build_moore_torus(4, 4).unwrap();
        let p = ModelParams::default();
        let s0 = SpinState::random(16, &mut stream(3));
        let a = step_synchronous(&s0, &net, &p, &mut stream(9)).unwrap();
        let b = step_synchronous(&s0, &net, &p, &mut stream(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn strong_coupling_flips_all_up_ring() {
        let ring = build_ring(4).unwrap();
        let p = ModelParams {
            beta: 50.0,
            ..ModelParams::default()
        };
        let up = SpinState::all_up(4);
        let mut rng = stream(21);
        let trials = 10_000;
        let mut all_down = 0;
        for _ in 0..trials {
            let next = step_synchronous(&up, &ring, &p, &mut rng).unwrap();
            if next.spins().iter().all(|&s| s == -1) {
                all_down += 1;
            }
        }
        assert!(all_down as f64 / trials as f64 >= 0.999);
    }

    #[test]
    fn zero_beta_is_a_fair_coin() {
        let ring = build_ring(4).unwrap();
        let p = ModelParams {
            beta: 0.0,
            ..ModelParams::default()
        };
        let mut state = SpinState::all_up(4);
        let mut rng = stream(4);
        let mut ups = 0u64;
        let steps = 20_000;
        for _ in 0..steps {
            state = step_synchronous(&state, &ring, &p, &mut rng).unwrap();
            ups += state.spins().iter().filter(|&&s| s == 1).count() as u64;
        }
        let total = (4 * steps) as f64;
        let sd = (0.25 * total).sqrt();
        assert!((ups as f64 - total / 2.0).abs() < 3.0 * sd);
    }

    #[test]
    fn run_lengths_and_lattice_of_values() {
        let net = build_moore_torus(4, 4).unwrap();
        let p = ModelParams {
            steps: 500,
            burn_in: 100,
            ..ModelParams::default()
        };
        let tr = run(&net, &p, 17).unwrap();
        assert_eq!(tr.h.len(), 400);
        assert_eq!(tr.m.len(), 400);
        assert_eq!(tr.seed, 17);
        for (&h, &m) in tr.h.iter().zip(&tr.m) {
            assert!(m.abs() <= 1.0);
            let mn = m * 16.0;
            assert_eq!(mn.fract(), 0.0);
            assert_eq!((mn as i64).rem_euclid(2), 0);
            assert_eq!((h * 16.0).fract(), 0.0);
        }
        assert_eq!(run(&net, &p, 17).unwrap(), tr);
        assert_ne!(run(&net, &p, 18).unwrap().h, tr.h);
    }

    #[test]
    fn zero_beta_run_has_no_net_magnetization() {
        let net = build_moore_torus(4, 4).unwrap();
        let p = ModelParams {
            beta: 0.0,
            ..ModelParams::default()
        };
        let tr = run(&net, &p, 5).unwrap();
        let mean = tr.m.iter().sum::<f64>() / tr.m.len() as f64;
        assert!(mean.abs() < 4.0 / ((16 * 8192) as f64).sqrt());
    }
}
