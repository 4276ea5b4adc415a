//! Adam with lazy (row-sparse) moment updates.
//!
//! Only rows that received a gradient in the current step have their
//! moments and parameters touched; bias correction uses the global step
//! count.

#[derive(Debug, Clone)]
pub struct Adam {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    step: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Adam {
    pub const BETA1: f64 = 0.9;
    pub const BETA2: f64 = 0.999;
    pub const EPSILON: f64 = 1e-8;

    /// Optimizer state for `len` parameters.
    pub fn new(learning_rate: f64, len: usize) -> Self {
        Adam {
            learning_rate,
            beta1: Self::BETA1,
            beta2: Self::BETA2,
            epsilon: Self::EPSILON,
            step: 0,
            m: vec![0.0; len],
            v: vec![0.0; len],
        }
    }

    /// Advances the step counter; call once per optimizer step before any
    /// [`update`](Self::update).
    pub fn begin_step(&mut self) {
        self.step += 1;
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// Applies one Adam update to `params`, whose state lives at
    /// `offset..offset + params.len()`.
    pub fn update(&mut self, offset: usize, params: &mut [f32], grad: &[f64]) {
        debug_assert!(self.step > 0, "begin_step not called");
        debug_assert_eq!(params.len(), grad.len());
        let t = self.step as i32;
        let correction1 = 1.0 - self.beta1.powi(t);
        let correction2 = 1.0 - self.beta2.powi(t);
        let m = &mut self.m[offset..offset + params.len()];
        let v = &mut self.v[offset..offset + params.len()];
        for j in 0..params.len() {
            let g = grad[j];
            m[j] = self.beta1 * m[j] + (1.0 - self.beta1) * g;
            v[j] = self.beta2 * v[j] + (1.0 - self.beta2) * g * g;
            let m_hat = m[j] / correction1;
            let v_hat = v[j] / correction2;
            let p = params[j] as f64 - self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
            params[j] = p as f32;
        }
    }
}
