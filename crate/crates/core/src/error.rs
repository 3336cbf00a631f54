use alloc::boxed::Box;
use alloc::string::String;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("instance {id}: {source}")]
    Instance {
        id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach the id of the instance being processed.
    pub fn for_instance(self, id: &str) -> Self {
        Error::Instance { id: id.into(), source: Box::new(self) }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
