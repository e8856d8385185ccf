//! Degree-truncated Gröbner bases, Hilbert series, and coherence witnesses.

mod coherence;
mod gb;
mod hilbert;

pub use coherence::{
    coherence_witness_check, default_bound, polynomial_plane_series, CoherenceReport, CoherenceWitnesses,
};
pub use gb::{complete_gb, NormalFormCache, Rule, TruncatedGb};
pub use hilbert::{
    as_series, base_denominator, base_recurrence, beilinson_dims, closed_form_check, hilbert_coeffs,
    ore_denominator, ore_recurrence, series_expansion, series_mul, to_integers, BeilinsonGrid, HilbertData,
};
