//! `rscn extract`: the leading and lower-order coefficients of `D`, the
//! comparison of the leading ones with the closed formula, and golden files.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use rscn_core::spin_shift::{dhat_from_b, extract_theorem1, make_d, SpinShiftBundle, Theorem1Entry};
use rscn_core::{HeckeContext, ParamMode, RootSystemCn};
use serde::Serialize;

use crate::cache::Cache;
use crate::config::{Common, ReportFormat};
use crate::{Failure, EXIT_FAIL, EXIT_PASS};

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "text")]
    pub format: ReportFormat,
    /// Compare `D` with the golden files in this directory.
    #[arg(long)]
    pub golden_dir: Option<PathBuf>,
    /// Write the golden files instead of comparing.
    #[arg(long, requires = "golden_dir")]
    pub bless: bool,
}

#[derive(Serialize)]
struct Leading {
    w: String,
    shift: String,
    coefficient: String,
    closed_formula: String,
    matches_closed_formula: bool,
    ratio: Option<String>,
}

#[derive(Serialize)]
struct Lower {
    shift: String,
    length: u32,
    coefficient: String,
}

#[derive(Serialize)]
struct Extraction {
    n: usize,
    l: String,
    rho_length: u32,
    leading: Vec<Leading>,
    lower: Vec<Lower>,
    anomalies: Vec<String>,
    golden: Option<String>,
}

fn file_stem(n: usize, b: &SpinShiftBundle) -> String {
    format!("D_n{n}_l{}-{}", b.l.l1, b.l.l2)
}

/// Shift keys and lengths, one per line, so a diff shows which terms moved.
pub fn manifest(rs: &RootSystemCn, b: &SpinShiftBundle) -> String {
    let mut s = String::from("# rscn-golden v1\n");
    s.push_str(&format!("n {}\nl {}\n", b.n, b.l));
    s.push_str(&format!("rho_length {}\n", rs.tau_length(&rs.rho_check).expect("rho is a coweight")));
    for (w, shift, _) in &b.leading {
        s.push_str(&format!("leading {w} {shift}\n"));
    }
    for (shift, len, _) in &b.lower {
        s.push_str(&format!("lower {shift} {len}\n"));
    }
    s
}

/// `Ok(status)` where the status is `blessed`, `match`, `mismatch` or
/// `missing`.
fn golden(dir: &Path, stem: &str, files: &[(&str, String)], bless: bool) -> Result<&'static str, Failure> {
    if bless {
        fs::create_dir_all(dir)?;
        for (ext, body) in files {
            fs::write(dir.join(format!("{stem}.{ext}")), body)?;
        }
        return Ok("blessed");
    }
    for (ext, body) in files {
        match fs::read_to_string(dir.join(format!("{stem}.{ext}"))) {
            Ok(s) if s == *body => {}
            Ok(_) => return Ok("mismatch"),
            Err(_) => return Ok("missing"),
        }
    }
    Ok("match")
}

fn leading_record(e: &Theorem1Entry) -> Leading {
    Leading {
        w: e.w.to_string(),
        shift: e.shift.to_string(),
        coefficient: e.computed.to_string(),
        closed_formula: e.printed.to_string(),
        matches_closed_formula: e.matches,
        ratio: e.ratio.as_ref().map(|r| r.to_string()),
    }
}

fn render_text(x: &Extraction) -> String {
    let mut s = format!(
        "D at n={} l={}: rho has translation length {}, {} leading and {} lower-order terms\n",
        x.n,
        x.l,
        x.rho_length,
        x.leading.len(),
        x.lower.len()
    );
    s.push_str("leading coefficients at tau(w rho):\n");
    for e in &x.leading {
        s.push_str(&format!("  w={} shift={}\n    {}\n", e.w, e.shift, e.coefficient));
        if e.matches_closed_formula {
            s.push_str("    closed formula: matches\n");
        } else {
            s.push_str(&format!("    closed formula: differs ({})\n", e.closed_formula));
            if let Some(r) = &e.ratio {
                s.push_str(&format!("    computed / closed formula = {r}\n"));
            }
        }
    }
    s.push_str("lower-order coefficients G_lambda:\n");
    if x.lower.is_empty() {
        s.push_str("  (none)\n");
    }
    for g in &x.lower {
        s.push_str(&format!("  shift={} length={}\n    {}\n", g.shift, g.length, g.coefficient));
    }
    if !x.anomalies.is_empty() {
        s.push_str(&format!("maximal-length shifts outside the orbit of rho: {}\n", x.anomalies.join(" ")));
    }
    if let Some(g) = &x.golden {
        s.push_str(&format!("golden: {g}\n"));
    }
    s
}

pub fn run(args: ExtractArgs) -> Result<u8, Failure> {
    args.common.validate()?;
    let n = args.common.n;
    let l = args.common.spin();
    let rs = RootSystemCn::build(n);
    let cache = Cache::new(args.common.cache_dir.clone());
    let g = HeckeContext::new(n, ParamMode::Generic);
    let b = cache.get_or_build(n, ParamMode::Generic, "B-restricted", || g.make_b_restricted())?;
    let bundle = make_d(&rs, &dhat_from_b(&g, &b), l)?;
    let status = match &args.golden_dir {
        Some(dir) => {
            let files = [("op", bundle.d.serialize(l.mode())), ("manifest", manifest(&rs, &bundle))];
            Some(golden(dir, &file_stem(n, &bundle), &files, args.bless)?)
        }
        None => None,
    };
    let x = Extraction {
        n,
        l: l.to_string(),
        rho_length: rs.tau_length(&rs.rho_check)?,
        leading: extract_theorem1(&rs, &bundle).iter().map(leading_record).collect(),
        lower: bundle
            .lower
            .iter()
            .map(|(s, len, c)| Lower { shift: s.to_string(), length: *len, coefficient: c.to_string() })
            .collect(),
        anomalies: bundle.anomalies.iter().map(|s| s.to_string()).collect(),
        golden: status.map(str::to_string),
    };
    match args.format {
        ReportFormat::Text => crate::emit(&render_text(&x))?,
        ReportFormat::Json => crate::emit(&format!("{}\n", serde_json::to_string_pretty(&x)?))?,
    }
    Ok(match status {
        Some("mismatch" | "missing") => EXIT_FAIL,
        _ => EXIT_PASS,
    })
}
