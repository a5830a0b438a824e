use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParams { name: &'static str, reason: &'static str },

    /// `|V₊|` is too small for the dressed basis to be defined.
    #[error("degenerate dressed frame: |V+| = {modulus:e}")]
    DegenerateFrame { modulus: f64 },

    #[error("singular dressed transform: |det U| = {det:e}")]
    SingularTransform { det: f64 },

    /// A free-space wavenumber vanishes (grazing incidence or a channel
    /// threshold).
    #[error("free-space wavenumber of channel {channel} vanishes (|k| = {modulus:e}); use an angle below 89.9 degrees")]
    ChannelDegenerate { channel: u8, modulus: f64 },

    #[error("transfer determinant collapsed (relative size {relative:e})")]
    ResonanceSingular { relative: f64 },

    #[error("boundary-matching system is ill-conditioned (condition estimate {cond:e})")]
    IllConditioned { cond: f64 },

    #[error("amplitude too small for a phase to be defined (|S| = {modulus:e})")]
    ZeroAmplitude { modulus: f64 },

    #[error("finite-difference stencil straddles a sharp resonance (amplitude ratio {ratio:e})")]
    StencilCrossesResonance { ratio: f64 },

    /// More than one critical angle was bracketed; all of them are returned.
    #[error("critical-angle equation has {} roots", roots.len())]
    MultipleRoots { roots: Vec<f64> },

    #[error("field peak lies within {margin} cells of the grid edge")]
    PeakOnBoundary { margin: usize },

    /// A second, well separated local maximum competes with the global one.
    #[error("field has competing peaks at ({:.4}, {:.4}) and ({:.4}, {:.4})", primary.0, primary.1, secondary.0, secondary.1)]
    MultiPeak { primary: (f64, f64), secondary: (f64, f64), ratio: f64 },
}

impl Error {
    /// Stable variant name, used for CLI diagnostics and CSV reason columns.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParams { .. } => "InvalidParams",
            Error::DegenerateFrame { .. } => "DegenerateFrame",
            Error::SingularTransform { .. } => "SingularTransform",
            Error::ChannelDegenerate { .. } => "ChannelDegenerate",
            Error::ResonanceSingular { .. } => "ResonanceSingular",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::ZeroAmplitude { .. } => "ZeroAmplitude",
            Error::StencilCrossesResonance { .. } => "StencilCrossesResonance",
            Error::MultipleRoots { .. } => "MultipleRoots",
            Error::PeakOnBoundary { .. } => "PeakOnBoundary",
            Error::MultiPeak { .. } => "MultiPeak",
        }
    }

    /// True for input validation failures, false for numerical ones.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParams { .. })
    }
}
