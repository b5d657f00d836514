//! `rscn print`.

use clap::{Args, ValueEnum};
use rscn_core::hamiltonian::{make_delta_plus, make_h, make_h_printed, make_h_shifted, make_h_shifted_explicit, make_macdonald};
use rscn_core::spin_shift::{dhat_from_b, make_d};
use rscn_core::{HalfVec, HeckeContext, NormalOp, ParamMode, RootSystemCn};

use crate::cache::Cache;
use crate::config::Common;
use crate::{Failure, EXIT_PASS};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrintFormat {
    /// The versioned serialization that `deserialize` reads back.
    Canonical,
    Human,
}

#[derive(Args, Debug)]
pub struct PrintArgs {
    /// One of T0..Tn, Y1..Yn, A, B, M, Delta, H, Hshift, Dhat, D.
    pub op: String,
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "canonical")]
    pub format: PrintFormat,
    /// A, B and Yi: the normal form restricted to invariants.
    #[arg(long)]
    pub restricted: bool,
    /// H and Hshift: the formula exactly as displayed, typos included.
    #[arg(long)]
    pub printed: bool,
}

#[derive(Debug, PartialEq, Eq)]
enum OpName {
    T(usize),
    Y(usize),
    A,
    B,
    M,
    Delta,
    H,
    HShift,
    DHat,
    D,
}

fn parse_name(s: &str, n: usize) -> Result<OpName, Failure> {
    let bad = || Failure::Usage(format!("unknown operator {s:?} for n={n}"));
    let indexed = |rest: &str, lo: usize| -> Result<usize, Failure> {
        let i: usize = rest.trim_start_matches('_').parse().map_err(|_| bad())?;
        if (lo..=n).contains(&i) {
            Ok(i)
        } else {
            Err(bad())
        }
    };
    Ok(match s {
        "A" => OpName::A,
        "B" => OpName::B,
        "M" => OpName::M,
        "Delta" => OpName::Delta,
        "H" => OpName::H,
        "Hshift" => OpName::HShift,
        "Dhat" => OpName::DHat,
        "D" => OpName::D,
        _ if s.starts_with('T') => OpName::T(indexed(&s[1..], 0)?),
        _ if s.starts_with('Y') => OpName::Y(indexed(&s[1..], 1)?),
        _ => return Err(bad()),
    })
}

fn render(op: &NormalOp, mode: ParamMode, format: PrintFormat) -> String {
    match format {
        PrintFormat::Canonical => op.serialize(mode),
        PrintFormat::Human => op.render_human(),
    }
}

pub fn run(args: PrintArgs) -> Result<u8, Failure> {
    args.common.validate()?;
    let n = args.common.n;
    let name = parse_name(&args.op, n)?;
    if args.restricted && !matches!(name, OpName::A | OpName::B | OpName::Y(_)) {
        return Err(Failure::Usage("--restricted applies to A, B and Yi".into()));
    }
    if args.printed && !matches!(name, OpName::H | OpName::HShift) {
        return Err(Failure::Usage("--printed applies to H and Hshift".into()));
    }
    let cache = Cache::new(args.common.cache_dir.clone());
    let rs = RootSystemCn::build(n);
    // Operators built from `l` always need it; the rest stay generic in t
    // unless `--l` asks for `t = q^l`.
    let l = args.common.spin();
    let mode = args.common.l.map(|l| l.mode()).unwrap_or(ParamMode::Generic);
    let ctx = || HeckeContext::new(n, mode);
    let b_restricted = |c: &HeckeContext| {
        cache.get_or_build(n, c.mode, "B-restricted", || c.make_b_restricted())
    };
    let r = if args.restricted { "-restricted" } else { "" };
    let (op, op_mode) = match name {
        OpName::T(i) => (ctx().make_t(i).clone(), mode),
        OpName::Y(i) => {
            let c = ctx();
            let y = if args.restricted {
                let mut w = vec![0; n];
                for x in w.iter_mut().take(i) {
                    *x = 1;
                }
                c.make_y_restricted(&HalfVec::from_int(&w))?
            } else {
                c.make_y_fund(i)
            };
            ((*y).clone(), mode)
        }
        OpName::A => {
            let c = ctx();
            let a = cache.get_or_build(n, mode, &format!("A{r}"), || {
                Ok::<_, Failure>(if args.restricted { c.make_a_restricted() } else { c.make_a() })
            })?;
            (a, mode)
        }
        OpName::B => {
            let c = ctx();
            let b = if args.restricted { b_restricted(&c)? } else { cache.get_or_build(n, mode, "B", || c.make_b())? };
            (b, mode)
        }
        OpName::M => (make_macdonald(&ctx()), mode),
        OpName::Delta => {
            let w = make_delta_plus(&rs, l);
            let text = match args.format {
                PrintFormat::Canonical => NormalOp::mult(n, w.to_ratfn()).serialize(l.mode()),
                PrintFormat::Human => format!("{w}\n"),
            };
            crate::emit(&text)?;
            return Ok(EXIT_PASS);
        }
        OpName::H => (if args.printed { make_h_printed(&rs, l) } else { make_h(&rs, l) }, l.mode()),
        OpName::HShift => {
            (if args.printed { make_h_shifted(&rs, l) } else { make_h_shifted_explicit(&rs, l) }, l.mode())
        }
        OpName::DHat => {
            let g = HeckeContext::new(n, ParamMode::Generic);
            let dhat = dhat_from_b(&g, &b_restricted(&g)?);
            match args.common.l {
                Some(l) => (dhat.specialize_t(l.l1, l.l2)?, l.mode()),
                None => (dhat, ParamMode::Generic),
            }
        }
        OpName::D => {
            let g = HeckeContext::new(n, ParamMode::Generic);
            let dhat = dhat_from_b(&g, &b_restricted(&g)?);
            (make_d(&rs, &dhat, l)?.d, l.mode())
        }
    };
    crate::emit(&render(&op, op_mode, args.format))?;
    Ok(EXIT_PASS)
}
