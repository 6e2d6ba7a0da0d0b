use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rigidrel::construct::{
    construct_2rigid, construct_ellrigid, ell_rigid_bound_holds, ell_rigid_capacity, exists_2rigid,
    falling_factorial, max_k_2rigid, middle_binomial, r_bounds, sperner_bound_holds,
    surjection_count, two_rigid_capacity,
};
use rigidrel::kernel::Relation;
use rigidrel::rigidity::is_hereditarily_ell_rigid;
use serde_json::json;

use crate::Outcome;

pub fn check(path: &Path, ell: usize) -> Outcome {
    let rho = Relation::from_json_str(&fs::read_to_string(path)?)?;
    let report = is_hereditarily_ell_rigid(&rho, ell)?;
    let mut out = json!({
        "k": rho.k(),
        "h": rho.arity(),
        "report": report,
    });
    if ell == 1 {
        out["reason"] =
            json!("a partial constant preserves every relation, so none is hereditarily 1-rigid");
    }
    println!("{out}");
    Ok(report.verdict)
}

pub fn construct(k: usize, ell: usize, h: usize, out: Option<&Path>, compact: bool) -> Outcome {
    let rho = if ell == 2 {
        construct_2rigid(k, h)?
    } else {
        construct_ellrigid(k, ell, h)?
    };
    let (lhs, rhs) = if ell == 2 {
        (falling_factorial(k as u64, 2), two_rigid_capacity(h as u32))
    } else {
        (
            falling_factorial(k as u64, ell as u64),
            ell_rigid_capacity(ell as u64, h as u64),
        )
    };
    let bound =
        json!({ "k": k, "ell": ell, "h": h, "lhs": lhs.to_string(), "rhs": rhs.to_string() });
    let body = if compact {
        rho.to_json_compact()
    } else {
        rho.to_json_tuples()
    };
    match out {
        Some(path) => {
            fs::write(path, serde_json::to_string(&body)? + "\n")?;
            println!("{bound}");
        }
        None => {
            eprintln!("{bound}");
            println!("{}", serde_json::to_string(&body)?);
        }
    }
    Ok(true)
}

pub fn bounds(ell: u64, h: u64, k: Option<u64>) -> Outcome {
    if ell == 0 || h == 0 {
        return Err("ell and h must be positive".into());
    }
    let s = surjection_count(h, ell);
    let mut rows: Vec<(&str, String)> = vec![
        ("ell", ell.to_string()),
        ("h", h.to_string()),
        ("surjections", s.to_string()),
        ("antichain_capacity", middle_binomial(&s).to_string()),
    ];
    if ell == 2 {
        rows.push((
            "two_rigid_capacity",
            two_rigid_capacity(h as u32).to_string(),
        ));
        rows.push(("max_k", max_k_2rigid(h as u32).to_string()));
    }
    if ell >= 3 {
        let (lo, hi) = r_bounds(ell, h);
        rows.push(("r_lower", lo.to_string()));
        rows.push(("r_upper", hi.to_string()));
    }
    let mut holds = true;
    if let Some(k) = k {
        rows.push(("k", k.to_string()));
        rows.push(("injective_tuples", falling_factorial(k, ell).to_string()));
        let antichain = sperner_bound_holds(k, ell, h);
        rows.push(("antichain_bound_holds", antichain.to_string()));
        holds = antichain;
        if ell == 2 {
            holds = exists_2rigid(k, h as u32);
            rows.push(("construction_bound_holds", holds.to_string()));
        } else if ell >= 3 {
            holds = ell_rigid_bound_holds(k, ell, h);
            rows.push(("construction_bound_holds", holds.to_string()));
        }
    }
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(["key", "value"])?;
    for (key, value) in rows {
        w.write_record([key, value.as_str()])?;
    }
    w.flush()?;
    io::stdout().flush()?;
    Ok(holds)
}
