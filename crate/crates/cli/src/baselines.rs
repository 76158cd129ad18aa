//! Published results of other image authentication techniques.
//!
//! These are transcribed figures, not re-runs: the comparison section of a
//! bench report prints them next to the measured rows so a reader can see
//! where a run lands. Capacity is in bytes; payload in bits per cover byte.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineEntry {
    pub technique: &'static str,
    pub capacity_bytes: u32,
    pub cover_width: u32,
    pub cover_height: u32,
    pub bpb: f64,
    pub psnr_db: f64,
}

const fn entry(
    technique: &'static str,
    capacity_bytes: u32,
    cover: u32,
    bpb: f64,
    psnr_db: f64,
) -> BaselineEntry {
    BaselineEntry {
        technique,
        capacity_bytes,
        cover_width: cover,
        cover_height: cover,
        bpb,
        psnr_db,
    }
}

pub const BASELINES: [BaselineEntry; 9] = [
    // Li, Wang: watermarking with Radon and 2-D wavelet transforms,
    // WCICA 2008. Measured on a 257x257 cover.
    entry("Yuancheng Li's Method", 1089, 257, 0.13, 28.68),
    // Tsui, Zhang, Androutsos: colour watermarking with multidimensional
    // Fourier transforms, IEEE TIFS 3(1), 2008.
    entry("SCDFT", 3840, 512, 0.12, 30.10),
    // Sengupta, Mandal: colour self authentication through DCT, ICRTIT 2011.
    entry("SADCT", 8192, 512, 0.08, 56.63),
    // Nikolaidis, Pitas: region-based image watermarking, IEEE TIP 10(11), 2001.
    entry("Region-Based", 16384, 512, 0.5, 40.79),
    // Sengupta, Mandal: Hough transform self signature in DCT, ISED 2011.
    entry("IAHTSSDCT", 16384, 512, 0.5, 47.48),
    // Sengupta, Mandal: wavelet domain with Hough signature, ETCS 2012.
    entry("AWTDHDS", 16384, 512, 0.5, 44.87),
    // Sengupta, Mandal: colour self authentication via wavelets, ICCS 2010.
    entry("SAWT", 131072, 512, 1.3, 36.62),
    // Averages originally published for this scheme.
    entry("SADT (set-1) (published)", 16384, 512, 0.5, 49.69),
    entry("SADT (set-1+set-2) (published)", 32768, 512, 1.0, 46.36),
];
