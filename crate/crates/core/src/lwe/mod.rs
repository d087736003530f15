//! Discrete Gaussian sampling, PLWE samples over `Z_q[x]/(Φ_{4p}⁺)`, and the
//! noise-amplification experiment through `U_{4p}`.

pub mod noise;
pub mod ring;
pub mod sampler;

pub use noise::{
    embed_forward, embed_inverse, lattice_embedding, noise_amplification, round_to_integers,
    vandermonde_embedding, Direction, LinearMap, MapStats, NoiseReport, NoiseStats,
};
pub use ring::{default_modulus, plwe_sample, LweParams, ModPoly, PlweSample, Ring};
pub use sampler::{analytic_variance, discrete_gaussian_vector, stream_rng, tail_bound};
