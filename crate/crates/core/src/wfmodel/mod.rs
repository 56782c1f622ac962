//! Wright–Fisher diffusion with mutation: parameters, speed and scale,
//! Jacobi polynomials, the line-of-descent death process, transition
//! densities and the exact transition sampler.

mod death;
mod density;
mod jacobi;
mod sampler;
mod spectral;
mod theta;

pub use death::{death_process, death_process_with, DeathConfig, DeathProcessDist};
pub use density::{
    auto_representation, mixture_kernel, transition_density, transition_density_auto, transition_density_m, DensityEval,
    Representation, SPECTRAL_MIN_T,
};
pub use jacobi::{jacobi_r, pi_n, OrthoJacobi};
pub use sampler::{exact_transition_sample, TransitionSampler};
pub use spectral::{singular_lambda, spectral_index, SpectralIndex};
pub use theta::{incomplete_beta, make_theta, scale, scale_deriv, speed_density, ThetaParams};
