//! Small shared helpers: deterministic seed derivation and fixed-width float
//! formatting for machine-readable output.

/// SplitMix64 step, used to derive independent per-trial seeds from a master
/// seed. The construction is stateless so trials can run in any order (or in
/// parallel) and still see identical streams.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed: hash of (master_seed, trial_index).
pub fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix64(master_seed ^ trial_index.wrapping_mul(0xA076_1D64_78BD_642F))
}

/// Formats a float with 17 significant digits so that values round-trip
/// exactly through text. Non-finite values render as `inf`/`-inf`/`nan`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{:.16e}", x)
    }
}

/// Parses floats written by [`fmt_f64`].
pub fn parse_f64(s: &str) -> Option<f64> {
    match s {
        "nan" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}
