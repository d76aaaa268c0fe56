//! Command-line front end for the exact curve-counting kernel.
//!
//! Every number printed is an exact rational: fractions appear as `p/q`,
//! never as decimals. Output is byte-identical across runs for identical
//! configurations. Exit codes: 0 on success, 1 when an internal identity
//! fails (the first failing identity is named on stderr), 2 on usage errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gw_core::feynman::{cp1_potentials, cp2_potentials};
use gw_core::genus0::{
    cp3_table_from_potential, km_cp2, wdvv_solve, Cp3Table,
    FrobeniusData,
};
use gw_core::genus1::{
    cp3_elliptic_table, ehx_cp2, elliptic_curve_sigma, getzler_cp2, space_curve_counts,
};
use gw_core::rat::Rat;
use gw_core::severi::{ch_compute, gw_from_severi, z_from_f, SeveriTable};
use gw_core::strata::full_intersection_theory;

#[derive(Parser)]
#[command(name = "gw", version, about = "Exact rational and elliptic curve counts")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Markdown)]
    format: Format,
    /// Write to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Csv,
    Json,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum Cp2Method {
    Getzler,
    Ehx,
    Severi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variety {
    Cp1,
    Cp2,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rational and elliptic plane curve counts (degree, 3n-1 or 3n points).
    Cp2 {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
        /// Route for the elliptic column: the boundary-relation recursion,
        /// the Virasoro-type recursion, or the contact (Severi) recursion.
        #[arg(long, value_enum, default_value_t = Cp2Method::Getzler)]
        method: Cp2Method,
    },
    /// Rational and elliptic space curve counts through lines and points.
    Cp3 {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
    },
    /// Stratum generating functions of the projective line.
    P1 {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        q_cap: u32,
    },
    /// Divisor sums: the elliptic-curve invariants and the weight-2
    /// Eisenstein coefficients.
    EllipticCurve {
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
        beta_max: u32,
    },
    /// Generalized Severi degrees (contact conditions with a fixed line).
    Severi {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=8))]
        d_max: u32,
    },
    /// Intersection theory of the nine invariant codimension-2 classes.
    Strata {
        #[command(subcommand)]
        what: StrataCmd,
    },
    /// Check the master boundary relation against the computed potentials.
    Verify {
        #[arg(long, value_enum)]
        variety: Variety,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        q_cap: u32,
    },
}

#[derive(Subcommand)]
enum StrataCmd {
    /// The 7 x 9 intersection matrix and its symmetric completion.
    Matrix,
    /// The two relations spanning the nullspace.
    Relations,
}

fn main() -> ExitCode {
    // honored interface: a thread cap, validated even though the kernel
    // computes sequentially (deterministically) regardless
    if let Ok(v) = std::env::var("GW_KERNEL_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {}
            _ => {
                eprintln!("GW_KERNEL_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<String, String> {
    match &cli.command {
        Cmd::Cp2 { n_max, method } => cp2_cmd(*n_max, *method, cli.format),
        Cmd::Cp3 { n_max } => cp3_cmd(*n_max, cli.format),
        Cmd::P1 { q_cap } => p1_cmd(*q_cap, cli.format),
        Cmd::EllipticCurve { beta_max } => elliptic_cmd(*beta_max, cli.format),
        Cmd::Severi { d_max } => severi_cmd(*d_max, cli.format),
        Cmd::Strata { what } => strata_cmd(what, cli.format),
        Cmd::Verify { variety, q_cap } => verify_cmd(*variety, *q_cap, cli.format),
    }
}

/// `p/q` (never decimal).
fn frac(r: &Rat) -> String {
    r.to_string()
}

/// Mixed-fraction style for eyeballing tables: `-532 2/3`.
fn mixed(r: &Rat) -> String {
    if r.is_integer() {
        return r.to_string();
    }
    let whole = r.numer() / r.denom();
    let rest = r.clone() - Rat::from_bigint(whole.clone());
    if whole == 0.into() {
        frac(r)
    } else {
        format!("{whole} {}", frac(&rest.abs()))
    }
}

type Cp2Tables = (BTreeMap<u32, Rat>, BTreeMap<u32, Rat>);

fn cp2_tables(n_max: u32, method: Cp2Method) -> Result<Cp2Tables, String> {
    match method {
        Cp2Method::Getzler => {
            let n0 = km_cp2(n_max).map_err(|e| e.to_string())?;
            let n1 = getzler_cp2(n_max, &n0).map_err(|e| e.to_string())?;
            Ok((n0, n1))
        }
        Cp2Method::Ehx => {
            let n0 = km_cp2(n_max).map_err(|e| e.to_string())?;
            let n1 = ehx_cp2(n_max, &n0).map_err(|e| e.to_string())?;
            Ok((n0, n1))
        }
        Cp2Method::Severi => {
            if n_max > 8 {
                return Err("the contact recursion is desk-scale: use --n-max <= 8".into());
            }
            let t = ch_compute(n_max);
            let mut n0 = BTreeMap::new();
            let mut n1 = BTreeMap::new();
            for d in 1..=n_max {
                n0.insert(d, gw_from_severi(d, 0, &t).map_err(|e| e.to_string())?);
                if d >= 3 {
                    n1.insert(d, gw_from_severi(d, 1, &t).map_err(|e| e.to_string())?);
                } else {
                    n1.insert(d, Rat::zero());
                }
            }
            Ok((n0, n1))
        }
    }
}

fn cp2_cmd(n_max: u32, method: Cp2Method, format: Format) -> Result<String, String> {
    let (n0, n1) = cp2_tables(n_max, method)?;
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str("n,N0,N1\n");
            for n in 1..=n_max {
                writeln!(s, "{n},{},{}", frac(&n0[&n]), frac(&n1[&n])).unwrap();
            }
        }
        Format::Json => {
            s.push_str("{\"rows\":[");
            for n in 1..=n_max {
                if n > 1 {
                    s.push(',');
                }
                write!(s, "{{\"n\":{n},\"N0\":\"{}\",\"N1\":\"{}\"}}", frac(&n0[&n]), frac(&n1[&n]))
                    .unwrap();
            }
            s.push_str("]}\n");
        }
        Format::Markdown => {
            s.push_str("Rational and elliptic plane curves of degree n\n\n");
            s.push_str("| n | N0 | N1 |\n|---|---|---|\n");
            for n in 1..=n_max {
                writeln!(s, "| {n} | {} | {} |", mixed(&n0[&n]), mixed(&n1[&n])).unwrap();
            }
        }
    }
    Ok(s)
}

fn cp3_json_rows(
    n_max: u32,
    n0: &Cp3Table,
    n1: &Cp3Table,
    counts: &BTreeMap<(u32, u32), Rat>,
) -> Vec<(u32, u32, u32, Rat, Rat, Rat)> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for b in (0..=2 * n).rev() {
            let a = 4 * n - 2 * b;
            rows.push((
                n,
                a,
                b,
                n0.get(a as i64, b as i64).unwrap(),
                n1.get(a as i64, b as i64).unwrap(),
                counts[&(a, b)].clone(),
            ));
        }
    }
    rows
}

fn cp3_cmd(n_max: u32, format: Format) -> Result<String, String> {
    let fd = FrobeniusData::cp(3);
    let seeds = BTreeMap::from([(vec![0u32, 2], Rat::one())]);
    let f0 = wdvv_solve(&fd, &seeds, n_max).map_err(|e| e.to_string())?;
    let n0 = cp3_table_from_potential(&f0, n_max).map_err(|e| e.to_string())?;
    let n1 = cp3_elliptic_table(n_max, &n0).map_err(|e| e.to_string())?;
    let counts = space_curve_counts(&n0, &n1).map_err(|e| e.to_string())?;
    let rows = cp3_json_rows(n_max, &n0, &n1, &counts);
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str("n,a,b,N0,N1,count\n");
            for (n, a, b, v0, v1, c) in &rows {
                writeln!(s, "{n},{a},{b},{},{},{}", frac(v0), frac(v1), frac(c)).unwrap();
            }
        }
        Format::Json => {
            s.push_str("{\"rows\":[");
            for (i, (n, a, b, v0, v1, c)) in rows.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write!(
                    s,
                    "{{\"n\":{n},\"a\":{a},\"b\":{b},\"N0\":\"{}\",\"N1\":\"{}\",\"count\":\"{}\"}}",
                    frac(v0),
                    frac(v1),
                    frac(c)
                )
                .unwrap();
            }
            s.push_str("]}\n");
        }
        Format::Markdown => {
            s.push_str("Rational and elliptic space curves of degree n through a lines and b points\n\n");
            s.push_str("| n | (a,b) | N0 | N1 | elliptic curves |\n|---|---|---|---|---|\n");
            for (n, a, b, v0, v1, c) in &rows {
                writeln!(s, "| {n} | ({a},{b}) | {} | {} | {} |", mixed(v0), mixed(v1), mixed(c))
                    .unwrap();
            }
        }
    }
    Ok(s)
}

fn p1_cmd(q_cap: u32, format: Format) -> Result<String, String> {
    let pots = cp1_potentials(q_cap as i32);
    let classes = gw_core::strata::invariant_classes();
    let per_class: Vec<(&str, gw_core::series::TruncSeries)> = classes
        .iter()
        .map(|c| (c.name, pots.stratum_potential(c)))
        .collect();
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str("class,vanishes,series\n");
            for (name, series) in &per_class {
                writeln!(s, "{name},{},{}", series.is_zero(), series).unwrap();
            }
        }
        Format::Json => {
            s.push_str("{\"classes\":[");
            for (i, (name, series)) in per_class.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write!(s, "{{\"name\":\"{name}\",\"series\":{}}}", series.to_canonical_json())
                    .unwrap();
            }
            s.push_str("]}\n");
        }
        Format::Markdown => {
            s.push_str("Stratum generating functions on the projective line\n\n");
            s.push_str("| class | F(class) |\n|---|---|\n");
            for (name, series) in &per_class {
                writeln!(s, "| {name} | {series} |").unwrap();
            }
        }
    }
    Ok(s)
}

fn elliptic_cmd(beta_max: u32, format: Format) -> Result<String, String> {
    let sigma = elliptic_curve_sigma(beta_max);
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str("beta,sigma,f1_coefficient\n");
            for (b, v) in &sigma {
                let f1 = v.clone() / Rat::int(*b as i64);
                writeln!(s, "{b},{},{}", frac(v), frac(&f1)).unwrap();
            }
        }
        Format::Json => {
            s.push_str("{\"g2_constant\":\"-1/24\",\"rows\":[");
            for (i, (b, v)) in sigma.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let f1 = v.clone() / Rat::int(*b as i64);
                write!(s, "{{\"beta\":{b},\"sigma\":\"{}\",\"f1\":\"{}\"}}", frac(v), frac(&f1))
                    .unwrap();
            }
            s.push_str("]}\n");
        }
        Format::Markdown => {
            s.push_str("Divisor sums: G2(q) = -1/24 + sum sigma(beta) q^beta,\n");
            s.push_str("and the weight of q^beta (e^{beta t1} - 1) in the genus-1 potential\n\n");
            s.push_str("| beta | sigma | sigma/beta |\n|---|---|---|\n");
            for (b, v) in &sigma {
                let f1 = v.clone() / Rat::int(*b as i64);
                writeln!(s, "| {b} | {} | {} |", frac(v), mixed(&f1)).unwrap();
            }
        }
    }
    Ok(s)
}

fn severi_rows(t: &SeveriTable) -> Vec<(String, Rat, Rat)> {
    let mut rows = Vec::new();
    for (key, n0) in &t.irreducible {
        let all = t.all.get(key).cloned().unwrap_or_else(Rat::zero);
        rows.push((
            format!(
                "{},{},{},{}",
                key.d,
                key.delta,
                key.alpha.dotted(),
                key.beta.dotted()
            ),
            all,
            n0.clone(),
        ));
    }
    rows
}

fn severi_cmd(d_max: u32, format: Format) -> Result<String, String> {
    let mut t = ch_compute(d_max);
    z_from_f(&mut t);
    let rows = severi_rows(&t);
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str("d,delta,alpha,beta,N,N0\n");
            for (prefix, all, n0) in &rows {
                writeln!(s, "{prefix},{},{}", frac(all), frac(n0)).unwrap();
            }
        }
        Format::Json => {
            s.push_str("{\"rows\":[");
            for (i, (prefix, all, n0)) in rows.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let parts: Vec<&str> = prefix.split(',').collect();
                write!(
                    s,
                    "{{\"d\":{},\"delta\":{},\"alpha\":\"{}\",\"beta\":\"{}\",\"N\":\"{}\",\"N0\":\"{}\"}}",
                    parts[0], parts[1], parts[2], parts[3], frac(all), frac(n0)
                )
                .unwrap();
            }
            s.push_str("]}\n");
        }
        Format::Markdown => {
            s.push_str("Generalized Severi degrees (contacts with a fixed line)\n\n");
            s.push_str("| d | delta | alpha | beta | N | N0 |\n|---|---|---|---|---|---|\n");
            for (prefix, all, n0) in &rows {
                let parts: Vec<&str> = prefix.split(',').collect();
                writeln!(
                    s,
                    "| {} | {} | {} | {} | {} | {} |",
                    parts[0],
                    parts[1],
                    parts[2],
                    parts[3],
                    frac(all),
                    frac(n0)
                )
                .unwrap();
            }
        }
    }
    Ok(s)
}

fn relation_string(v: &[Rat]) -> String {
    let items: Vec<String> = v.iter().map(frac).collect();
    format!("({})", items.join(","))
}

fn strata_cmd(what: &StrataCmd, format: Format) -> Result<String, String> {
    let (names, matrix, (known, new), completed) =
        full_intersection_theory().map_err(|e| e.to_string())?;
    let mut s = String::new();
    match what {
        StrataCmd::Matrix => match format {
            Format::Csv => {
                writeln!(s, "class,{}", names.join(",")).unwrap();
                for (i, row) in matrix.iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(frac).collect();
                    writeln!(s, "{},{}", names[i], cells.join(",")).unwrap();
                }
            }
            Format::Json => {
                let quoted: Vec<String> = names.iter().map(|n| format!("\"{n}\"")).collect();
                write!(s, "{{\"classes\":[{}],\"matrix\":[", quoted.join(",")).unwrap();
                for (i, row) in matrix.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let cells: Vec<String> =
                        row.iter().map(|x| format!("\"{}\"", frac(x))).collect();
                    write!(s, "[{}]", cells.join(",")).unwrap();
                }
                write!(s, "],\"relations\":[{},{}],\"completed\":[", relation_json(&known), relation_json(&new))
                    .unwrap();
                for (i, row) in completed.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let cells: Vec<String> =
                        row.iter().map(|x| format!("\"{}\"", frac(x))).collect();
                    write!(s, "[{}]", cells.join(",")).unwrap();
                }
                s.push_str("]}\n");
            }
            Format::Markdown => {
                s.push_str("Intersection matrix of the nine invariant codimension-2 classes\n");
                s.push_str("(first seven rows; the completed pairings follow)\n\n");
                writeln!(s, "| | {} |", names.join(" | ")).unwrap();
                writeln!(s, "|---{}|", "|---".repeat(9)).unwrap();
                for (i, row) in matrix.iter().enumerate() {
                    let cells: Vec<String> = row.iter().map(frac).collect();
                    writeln!(s, "| {} | {} |", names[i], cells.join(" | ")).unwrap();
                }
                s.push('\n');
                writeln!(
                    s,
                    "completed pairings: alpha.alpha = {}, alpha.beta = {}, beta.beta = {}",
                    frac(&completed[7][7]),
                    frac(&completed[7][8]),
                    frac(&completed[8][8])
                )
                .unwrap();
            }
        },
        StrataCmd::Relations => match format {
            Format::Csv => {
                writeln!(s, "relation,{}", names.join(",")).unwrap();
                let k: Vec<String> = known.iter().map(frac).collect();
                let n: Vec<String> = new.iter().map(frac).collect();
                writeln!(s, "known,{}", k.join(",")).unwrap();
                writeln!(s, "new,{}", n.join(",")).unwrap();
            }
            Format::Json => {
                writeln!(
                    s,
                    "{{\"classes\":[{}],\"relations\":[{},{}]}}",
                    names.iter().map(|n| format!("\"{n}\"")).collect::<Vec<_>>().join(","),
                    relation_json(&known),
                    relation_json(&new)
                )
                .unwrap();
            }
            Format::Markdown => {
                s.push_str("Relations among the nine classes (coefficient vectors in the\n");
                writeln!(s, "order {}):\n", names.join(", ")).unwrap();
                writeln!(s, "known: {}", relation_string(&known)).unwrap();
                writeln!(s, "new:   {}", relation_string(&new)).unwrap();
            }
        },
    }
    Ok(s)
}

fn relation_json(v: &[Rat]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("\"{}\"", frac(x))).collect();
    format!("[{}]", items.join(","))
}

fn verify_cmd(variety: Variety, q_cap: u32, format: Format) -> Result<String, String> {
    let (name, pots) = match variety {
        Variety::Cp1 => ("cp1", cp1_potentials(q_cap as i32)),
        Variety::Cp2 => {
            let n0 = km_cp2(q_cap).map_err(|e| e.to_string())?;
            let n1 = getzler_cp2(q_cap, &n0).map_err(|e| e.to_string())?;
            ("cp2", cp2_potentials(q_cap as i32, &n0, &n1).map_err(|e| e.to_string())?)
        }
    };
    let residual = pots.verify_relation();
    let ctx = &pots.ctx;
    // monomials checked per q-order: count the monomials of the seven
    // contraction terms' support, order by order
    let mut checked: BTreeMap<i32, usize> = BTreeMap::new();
    for series in [&pots.f03, &pots.f04, &pots.f05, &pots.f11, &pots.f12] {
        for (e, _) in series.terms() {
            *checked.entry(e.get(ctx.x())).or_insert(0) += 1;
        }
    }
    let mut s = String::new();
    if !residual.is_zero() {
        return Err(format!(
            "master relation residual is nonzero for {name} at q-cap {q_cap}: {} monomials survive",
            residual.num_terms()
        ));
    }
    match format {
        Format::Json => {
            writeln!(
                s,
                "{{\"variety\":\"{name}\",\"q_cap\":{q_cap},\"residual_monomials\":{}}}",
                residual.num_terms()
            )
            .unwrap();
        }
        _ => {
            writeln!(s, "master relation on {name}, q-cap {q_cap}").unwrap();
            for (order, count) in &checked {
                writeln!(s, "  q^{order}: {count} potential monomials fed the relation").unwrap();
            }
            writeln!(s, "residual monomials: {}", residual.num_terms()).unwrap();
            writeln!(s, "relation holds identically within caps").unwrap();
        }
    }
    Ok(s)
}
