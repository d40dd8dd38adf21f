//! Phase-space simulation of photon-added coherent states in lossy thermal
//! channels.
//!
//! The crate computes Wigner distributions of photon-added coherent states,
//! pushes them through a finite-temperature damping channel by Gaussian
//! smoothing quadrature, quantifies the volume of the negative part of the
//! distribution, locates the decay time at which that negativity vanishes,
//! and cross-checks beam-splitter gate overlaps against a truncated
//! number-basis oracle.
//!
//! ```
//! use num_complex::Complex64;
//! use pacs_wigner::negativity::{threshold_analytic, threshold_numeric, THRESHOLD_TOL};
//! use pacs_wigner::states::wigner_pacs_initial;
//! use pacs_wigner::{GridSpec, PacsSpec};
//!
//! // Negative volume of the single-photon Fock state (alpha = 0, m = 1).
//! let spec = PacsSpec::new(Complex64::new(0.0, 0.0), 1).unwrap();
//! let field = wigner_pacs_initial(&spec, GridSpec::default_window()).unwrap();
//! let negativity = field.negative_volume().unwrap();
//! assert!((negativity.p_nw - (2.0 * (-0.5f64).exp() - 1.0)).abs() < 1e-4);
//!
//! // Decay time at which a thermal channel with n = 1 erases that negativity.
//! let numeric = threshold_numeric(&spec, 1.0, THRESHOLD_TOL).unwrap();
//! let exact = threshold_analytic(1.0).unwrap();
//! assert!((numeric.gamma_t_c - exact.gamma_t_c).abs() < 1e-3);
//! ```

pub mod channel;
pub mod error;
pub mod gate;
pub mod negativity;
pub mod phase_space;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use phase_space::{GridSpec, NegativityResult, WignerField};
pub use states::{ChannelParams, PacsSpec};
