//! Atomic filters for graph signals.
//!
//! An atomic filter is a graph filter `H_a = U diag(a) U*` whose frequency
//! response `a` has pairwise-distinct components; every graph filter on the
//! same Fourier basis is then a polynomial in `H_a`, which makes it a weak
//! form of the classical shift operator. This crate provides:
//!
//! - [`graph`]: weighted undirected graphs and the ring / path / complete /
//!   complete bipartite / circulant / sensor generators.
//! - [`spectral`]: Laplacian eigendecomposition, multiplicity analysis, the
//!   conjugate-paired ("normal") Fourier basis, the DFT basis, and the GFT.
//! - [`filters`]: filter construction and application, the property battery
//!   (atomic, norm-preserving, smoothness-preserving, periodic,
//!   real-preserving, permutation), polynomial expansion, and comparison shifts.
//! - [`frames`]: windowed Fourier atoms with exact reconstruction.
//! - [`figures`]: deterministic figure pipelines shared by the CLI and the web demo.
//!
//! ```
//! use std::sync::Arc;
//! use atomic_filters::filters::{apply, make_filter, FrequencyResponse, ShiftDirection};
//! use atomic_filters::{signals, spectral::dft_basis};
//!
//! let basis = Arc::new(dft_basis(16));
//! let shift = make_filter(&basis, FrequencyResponse::classical(16, ShiftDirection::Down)).unwrap();
//! let y = apply(&shift, &signals::pulse(16, 0), 3).unwrap();
//! assert!((y[3].re - 1.0).abs() < 1e-12);
//! ```

pub mod error;
pub mod figures;
pub mod filters;
pub mod frames;
pub mod graph;
pub mod linalg;
pub mod signals;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, GraphSignal};
