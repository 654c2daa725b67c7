//! Activation decay and weight reduction curves.

/// Maximum number of resources resident in short-term memory.
pub const STM_CAPACITY: usize = 7;

/// Activation below which a resource's weight is reduced on consolidation.
pub const ACTIVATION_THRESHOLD: f64 = 0.2;

/// Weight below which a long-term resource is forgotten.
pub const FORGET_THRESHOLD: f64 = 0.2;

/// One decay step: `A <- ln(A + 1)`.
#[inline]
pub fn decay_activation(activation: f64) -> f64 {
    activation.ln_1p()
}

pub fn decay_activation_n(mut activation: f64, ticks: u64) -> f64 {
    for _ in 0..ticks {
        activation = decay_activation(activation);
    }
    activation
}

/// Long-term weight of an under-activated resource: `W_LTM <- ln(W_STM + 1)`.
#[inline]
pub fn reduce_weight(weight: f64) -> f64 {
    weight.ln_1p()
}
