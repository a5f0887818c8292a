//! Problem files drive the command-line interface; the same JSON schema is
//! available programmatically. A file describes a domain, norm, molecule,
//! grid, and optionally a check battery; each subcommand reads only the
//! sections it needs. Parsing is strict (unknown sections rejected) and
//! serialization round-trips exactly.

use lipfree::cli::{run_check, run_norm, Method, Overrides};
use lipfree::problem::{parse_problem, to_json_string};
use lipfree::Result;

fn main() -> Result<()> {
    println!("Problem files and the in-process subcommands");
    println!("============================================");

    let text = r#"{
        "domain": {"shape": "box", "lo": [-2.0, -2.0], "hi": [2.0, 2.0]},
        "norm": {"kind": "l2", "facets": 16},
        "molecule": [
            {"point": [1.0, 0.0], "weight": 1.0},
            {"point": [0.0, 1.0], "weight": -1.0}
        ],
        "grid": {"h": 0.125, "alignment": "centered"},
        "battery": {"name": "isometry1d", "seed": 7}
    }"#;
    let spec = parse_problem(text)?;

    println!("norm --method dual:");
    print!("{}", run_norm(&spec, Method::Dual, &Overrides::default())?);

    println!("\nnorm --method both:");
    print!("{}", run_norm(&spec, Method::Both, &Overrides::default())?);

    println!("\ncheck (battery from the file):");
    let (report, passed) = run_check(&spec, &Overrides::default())?;
    print!("{report}");
    println!("overall: {}", if passed { "pass" } else { "FAIL" });

    // the spec serializes back to the same data
    let round = parse_problem(&to_json_string(&spec)?)?;
    println!("\nserialize -> parse preserves the spec: {}", round == spec);
    Ok(())
}
