//! Build a sweep from a JSON config and write it as CSV.
//!
//! Set ABRING_THREADS to pin the worker count; the output does not depend on it.

use abring::sweep::{emit, run_sweep, Format, SweepConfig, SweepSettings};

fn main() -> abring::Result<()> {
    let settings: SweepSettings = serde_json::from_str(
        r#"{"quantity": "amplitudes", "gamma": 0.707, "phi": "0:1.5707963267948966:9", "k": "1.4:1.7:4"}"#,
    )
    .map_err(|e| abring::Error::Config(e.to_string()))?;
    let cfg = SweepConfig::from_settings(settings)?;
    let out = run_sweep(&cfg)?;
    println!("{} rows", out.len());

    let path = std::env::temp_dir().join("abring_sweep.csv");
    emit(&out, Format::Csv, Some(&path))?;
    println!("wrote {}", path.display());
    print!("{}", std::fs::read_to_string(&path)?.lines().take(4).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
