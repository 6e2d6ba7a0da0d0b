use std::fs;
use std::path::PathBuf;

use rigidrel::kernel::PartialFn;
use rigidrel::preserve::preserves;
use rigidrel::strongrigid::{
    chain_inclusion, delta, delta_identifies_last_coordinates, finite_family_escape,
    limit_is_trivial_clone, phi, phi_preserves_all, witness_nontrivial,
};
use rigidrel::Error;
use serde_json::json;

use crate::Outcome;

#[derive(Debug, clap::Args)]
pub struct StrongArgs {
    /// Arity of the separating function (phi suite); 3 and 4 if absent.
    #[arg(long)]
    n: Option<usize>,
    /// Partial function JSON file (witness suite).
    #[arg(long)]
    fn_file: Option<PathBuf>,
    /// Family arity (chain suite).
    #[arg(long)]
    h: Option<usize>,
    #[arg(long, default_value_t = 3)]
    arity_cap: usize,
    /// Largest domain size swept by the chain suite.
    #[arg(long, default_value_t = 8)]
    dom_cap: usize,
}

pub fn separators(args: &StrongArgs) -> Outcome {
    let ns = match args.n {
        Some(n) => vec![n],
        None => vec![3, 4],
    };
    let mut all = true;
    for n in ns {
        let f = phi(n)?;
        let nontrivial = !f.is_trivial();
        let mut below = Vec::new();
        for h in 1..n.min(rigidrel::strongrigid::PHI_SWEEP_MAX_ARITY + 1) {
            let ok = phi_preserves_all(n, h)?;
            all &= ok;
            below.push(json!({ "h": h, "preserves_all": ok }));
        }
        let breaks = !preserves(&f, &delta(1, n)?)?.preserved();
        all &= nontrivial && breaks;
        println!(
            "{}",
            json!({
                "n": n,
                "function": f,
                "nontrivial": nontrivial,
                "smaller_arities": below,
                "breaks_delta_1_n": breaks,
            })
        );
    }
    Ok(all)
}

pub fn witness(args: &StrongArgs) -> Outcome {
    let path = args
        .fn_file
        .as_ref()
        .ok_or("--fn-file is required for the witness suite")?;
    let f = PartialFn::from_json_str(&fs::read_to_string(path)?)?;
    match witness_nontrivial(&f) {
        Ok(w) => {
            let replayed = w.replay(&f);
            let mut out = w.to_json();
            out["replayed"] = json!(replayed);
            println!("{out}");
            Ok(replayed)
        }
        Err(Error::NoWitness) => {
            println!("{}", json!({ "trivial": true }));
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn chain(args: &StrongArgs) -> Outcome {
    let h = args.h.ok_or("--h is required for the chain suite")?;
    let report = chain_inclusion(h, args.arity_cap, args.dom_cap)?;
    let ts: Vec<usize> = (2..h).collect();
    let identification_ok = ts
        .iter()
        .all(|&t| delta_identifies_last_coordinates(t, h).unwrap_or(false));
    println!(
        "{}",
        json!({
            "report": report,
            "separator": format!("phi({})", h + 1),
            "last_coordinate_identification": identification_ok,
        })
    );
    Ok(report.holds && identification_ok)
}

pub fn limit(args: &StrongArgs) -> Outcome {
    let report = limit_is_trivial_clone(args.arity_cap)?;
    let mut escapes = Vec::new();
    let mut escapes_ok = true;
    for h0 in 2..=4 {
        let w = finite_family_escape(h0)?;
        escapes_ok &= w.is_some();
        escapes.push(json!({
            "h0": h0,
            "member": format!("phi({})", h0 + 1),
            "witness": w.map(|w| w.to_json()),
        }));
    }
    println!(
        "{}",
        json!({ "report": report, "finite_family_escapes": escapes })
    );
    Ok(report.holds && escapes_ok)
}
