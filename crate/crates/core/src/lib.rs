//! Self-authentication of grayscale images with 4x4 Daubechies blocks.
//!
//! Every 4x4 tile of the cover is transformed with the four-tap Daubechies
//! wavelet. A signature byte derived from the tile's own coefficients (and
//! optionally a second one from its low-frequency band) is written into the
//! low-order magnitude bits of one coefficient per subband. A verifier
//! needs nothing but the candidate image: it recomputes the signature of
//! every tile and compares it with the bits it finds, flagging the tiles
//! that disagree.
//!
//! ```
//! use sadt::{authenticate_image, embed_image, EmbedConfig, Image, Mode, Verdict};
//!
//! let cover = Image::from_fn(64, 64, |x, y| (x * 3 + y * 2) as u8)?;
//! let cfg = EmbedConfig::new(Mode::Set1Only);
//! let stego = embed_image(&cover, &cfg)?;
//! let report = authenticate_image(&stego, &cfg)?;
//! assert_eq!(report.verdict, Verdict::Authentic);
//! # Ok::<(), sadt::Error>(())
//! ```

pub mod codec;
pub mod error;
pub mod image;
pub mod metrics;
pub mod payload;
pub mod pgm;
pub mod synth;
pub mod wavelet;

pub use codec::{
    authenticate_image, embed_image, embed_image_with_stats, AuthReport, EmbedConfig, EmbedOutcome,
    EmbedStats, MaskAuthResult, TamperMap, Verdict,
};
pub use error::{Error, Result};
pub use image::Image;
pub use metrics::QualityMetrics;
pub use payload::{Mode, SecretPayload};
pub use pgm::{read_pgm, write_pgm, PgmEncoding};
pub use wavelet::{Band, CoefficientImage, CoefficientMask, FilterBank};
