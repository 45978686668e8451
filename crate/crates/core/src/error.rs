use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid raster: {0}")]
    InvalidRaster(String),

    #[error("dimension mismatch: expected {expected_w}x{expected_h}, got {got_w}x{got_h}")]
    DimensionMismatch {
        expected_w: usize,
        expected_h: usize,
        got_w: usize,
        got_h: usize,
    },

    #[error("unsupported band count {0}")]
    UnsupportedBandCount(usize),

    #[error("band count mismatch: {0} vs {1}")]
    BandCountMismatch(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pnm error at byte {offset}: {message}")]
    Pnm { offset: usize, message: String },

    #[error("unknown method {name:?}; valid methods are SF, IHS, HSV, HFA, HFM, RVS, EF")]
    UnknownMethod { name: String },

    #[error("undefined DI: reference band is zero everywhere")]
    UndefinedDeviationIndex,

    #[error("undefined HPDI: PAN is zero everywhere")]
    UndefinedHpdi,

    #[error("undefined correlation: zero variance input")]
    UndefinedCorrelation,

    #[error("class empty: {0} region has no pixels")]
    EmptyClass(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn pnm(offset: usize, message: impl Into<String>) -> Self {
        Error::Pnm {
            offset,
            message: message.into(),
        }
    }
}
