//! Command-line surface for the relweyl library: classification tables,
//! component counts, matrix-level verification runs in `SL_n`, and
//! restriction labels.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input or precondition
//! error.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use relweyl::companion::{companion_equations, component_count, phi_base_sign};
use relweyl::frobenius::{h1, h1_induced, res_label_map, restriction_label};
use relweyl::lattice::AbelianHom;
use relweyl::root_datum::{center_component_group, h_map, CartanType, RootDatum};
use relweyl::sln::{
    all_permutations, sample_o_set, verify_class, verify_det_identity, verify_mult_matrix,
    FieldCtx,
};
use relweyl::phi::table_generate;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "relweyl", version, about = "Computations with relative Weyl groups and center component groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit the classification table of cuspidal standard Levis.
    Table {
        /// Type letter (A-G).
        #[arg(long = "type")]
        ctype: String,
        #[arg(long)]
        rank: usize,
        /// Characteristic (a good prime for the type).
        #[arg(long)]
        p: u64,
        /// Machine-readable JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Component count and base sign data for one Levi.
    Components {
        #[arg(long = "type")]
        ctype: String,
        #[arg(long)]
        rank: usize,
        /// Comma-separated 1-based node indices.
        #[arg(long)]
        levi: String,
        #[arg(long)]
        p: u64,
    },
    /// Run the SL_n matrix verifications (determinant identity, class
    /// computation, multiplication-matrix property).
    VerifySln {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        /// "rational" or a prime q.
        #[arg(long, default_value = "rational")]
        field: String,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Compute the restriction label for a twisted Levi.
    Restrict {
        #[arg(long = "type")]
        ctype: String,
        #[arg(long)]
        rank: usize,
        /// Comma-separated 1-based node indices of the Levi M.
        #[arg(long)]
        levi: String,
        /// Twist word, e.g. "s1" or "s1,s2" (generators of the relative
        /// Weyl group of the minimal Levi); omit for the split form.
        #[arg(long)]
        twist: Option<String>,
        #[arg(long)]
        p: u64,
        /// Prime power recorded in the output caveat.
        #[arg(long)]
        q: Option<u64>,
        /// Intermediate Levi (comma-separated, 1-based): re-derive the
        /// translation part through it and require agreement.
        #[arg(long)]
        via: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn parse_type(letter: &str, rank: usize) -> Result<CartanType> {
    CartanType::parse(&format!("{}{}", letter.trim().to_uppercase(), rank))
        .map_err(|e| anyhow!("invalid type: {e}"))
}

fn parse_levi(s: &str, rank: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let v: usize = part.parse().context("levi indices must be integers")?;
        if v < 1 || v > rank {
            bail!("levi index {v} out of range 1..={rank}");
        }
        out.push(v - 1);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_twist(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in s
        .split([',', ' '])
        .map(str::trim)
        .filter(|p| !p.is_empty())
    {
        let digits = part.strip_prefix('s').unwrap_or(part);
        let v: usize = digits.parse().context("twist word must look like s1,s2")?;
        if v < 1 {
            bail!("twist generator indices are 1-based");
        }
        out.push(v - 1);
    }
    Ok(out)
}

fn seed_from_env() -> u64 {
    std::env::var("RELWEYL_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0xC0FFEE)
}

/// ASCII rendering of the marked Dynkin diagram: `*` for Levi (black)
/// nodes, `o` for the rest, `-`/`=`/`#` for single/double/triple edges
/// between consecutively numbered nodes, off-chain edges listed after.
fn render_diagram(rd: &RootDatum, levi: &[usize]) -> String {
    let cartan = rd.cartan();
    let r = rd.rank;
    let marker = |i: usize| {
        if levi.contains(&i) {
            format!("{}*", i + 1)
        } else {
            format!("{}o", i + 1)
        }
    };
    let bond = |i: usize, j: usize| {
        let a = cartan[(i, j)].to_i64().unwrap_or(0).unsigned_abs();
        let b = cartan[(j, i)].to_i64().unwrap_or(0).unsigned_abs();
        match a.max(b) {
            0 => "  ",
            1 => "-",
            2 => "=",
            _ => "#",
        }
    };
    let mut line = String::new();
    for i in 0..r {
        line.push_str(&marker(i));
        if i + 1 < r {
            line.push_str(bond(i, i + 1));
        }
    }
    let mut extras = Vec::new();
    for i in 0..r {
        for j in i + 2..r {
            if !cartan[(i, j)].to_i64().map(|v| v == 0).unwrap_or(true) {
                extras.push(format!("[{}~{}]", i + 1, j + 1));
            }
        }
    }
    if !extras.is_empty() {
        line.push(' ');
        line.push_str(&extras.join(" "));
    }
    line
}

fn value_text(order: u64, coords: &[u64]) -> String {
    match order {
        1 => "+1".to_string(),
        2 => "-1".to_string(),
        _ => format!("ord{order}@{coords:?}"),
    }
}

#[derive(Serialize)]
struct ComponentsOut {
    component_count: u64,
    free_rank: usize,
    n: u64,
    phi_sign: i64,
}

#[derive(Serialize)]
struct RestrictOut {
    group: String,
    levi: Vec<usize>,
    twist_word: Vec<String>,
    minimal_levi: Vec<usize>,
    h1_group: Vec<u64>,
    label_coords: Vec<u64>,
    q: Option<u64>,
    q_caveat: String,
    via_agrees: Option<bool>,
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Table { ctype, rank, p, json } => {
            if !is_prime(p) {
                bail!("p must be prime");
            }
            let ct = parse_type(&ctype, rank)?;
            let rows = table_generate(&ct, p).map_err(|e| anyhow!("{e}"))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                let rd = RootDatum::simply_connected(&ct).map_err(|e| anyhow!("{e}"))?;
                if rows.is_empty() {
                    println!("{}: no cuspidal proper Levi rows", ct);
                }
                for row in &rows {
                    let levi0: Vec<usize> = row.levi.iter().map(|&i| i - 1).collect();
                    println!("group {}  levi {:?}  ({})", row.group, row.levi, row.levi_type);
                    println!("  {}", render_diagram(&rd, &levi0));
                    println!(
                        "  W = {}  Z = {:?}",
                        row.relative_type, row.center_invariant_factors
                    );
                    let vals: Vec<String> = row
                        .generator_values
                        .iter()
                        .map(|g| {
                            format!("s[{}]={}", g.node, value_text(g.value_order, &g.value_coords))
                        })
                        .collect();
                    println!("  values: {}", if vals.is_empty() { "none".into() } else { vals.join("  ") });
                }
            }
            Ok(0)
        }
        Cmd::Components { ctype, rank, levi, p } => {
            if !is_prime(p) {
                bail!("p must be prime");
            }
            let ct = parse_type(&ctype, rank)?;
            let rd = RootDatum::simply_connected(&ct).map_err(|e| anyhow!("{e}"))?;
            let levi = parse_levi(&levi, rd.rank)?;
            let sys = companion_equations(&rd, &levi).map_err(|e| anyhow!("{e}"))?;
            let count = component_count(&sys, p)
                .map_err(|e| anyhow!("{e}"))?
                .to_u64()
                .ok_or_else(|| anyhow!("component count overflow"))?;
            let center = center_component_group(&rd, &levi);
            let total = center
                .group
                .order()
                .to_u64()
                .ok_or_else(|| anyhow!("center order overflow"))?;
            let sign_el = phi_base_sign(&rd, &levi, p).map_err(|e| anyhow!("{e}"))?;
            let out = ComponentsOut {
                component_count: count,
                free_rank: sys.free_rank(),
                n: total / count,
                phi_sign: if sign_el.is_zero() { 1 } else { -1 },
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(0)
        }
        Cmd::VerifySln { k, d, field, samples } => {
            if k < 1 || d < 1 {
                bail!("need k, d >= 1");
            }
            let ctx = match field.as_str() {
                "rational" | "q" => FieldCtx::Rational,
                other => {
                    let q: u64 = other.parse().context("field must be 'rational' or a prime")?;
                    if !is_prime(q) {
                        bail!("finite field size must be prime");
                    }
                    FieldCtx::Prime(q)
                }
            };
            let mut rng = StdRng::seed_from_u64(seed_from_env());
            let perms = all_permutations(k);
            let mut failures = 0usize;
            for s in 0..samples.max(1) {
                let bre = sample_o_set(&ctx, k, d, &mut rng).map_err(|e| anyhow!("{e}"))?;
                if !verify_det_identity(&ctx, &bre) {
                    eprintln!("sample {s}: determinant identity FAILED");
                    failures += 1;
                }
                if !verify_mult_matrix(&ctx, &bre).map_err(|e| anyhow!("{e}"))? {
                    eprintln!("sample {s}: multiplication matrix property FAILED");
                    failures += 1;
                }
                for w in &perms {
                    match verify_class(&ctx, &bre, w) {
                        Ok(res) if res.agrees() => {}
                        Ok(_) => {
                            eprintln!("sample {s}: class value mismatch for w = {w:?}");
                            failures += 1;
                        }
                        Err(e) => {
                            eprintln!("sample {s}: class computation error for w = {w:?}: {e}");
                            failures += 1;
                        }
                    }
                }
            }
            if failures == 0 {
                println!(
                    "verify-sln k={k} d={d}: {} samples x {} permutations passed",
                    samples.max(1),
                    perms.len()
                );
                Ok(0)
            } else {
                println!("verify-sln k={k} d={d}: {failures} check(s) failed");
                Ok(1)
            }
        }
        Cmd::Restrict { ctype, rank, levi, twist, p, q, via } => {
            if !is_prime(p) {
                bail!("p must be prime");
            }
            let ct = parse_type(&ctype, rank)?;
            let rd = RootDatum::simply_connected(&ct).map_err(|e| anyhow!("{e}"))?;
            let levi = parse_levi(&levi, rd.rank)?;
            let word = match &twist {
                Some(s) => parse_twist(s)?,
                None => Vec::new(),
            };
            let label = restriction_label(&rd, &levi, &word, p, None).map_err(|e| anyhow!("{e}"))?;
            let mut via_agrees = None;
            if let Some(via_s) = &via {
                let mid = parse_levi(via_s, rd.rank)?;
                if !levi.iter().all(|i| mid.contains(i)) {
                    bail!("--via Levi must contain the target Levi");
                }
                // Translation-part transitivity: the coinvariant map induced
                // by the composite center map must equal the composite of the
                // induced maps, on every class of the ambient center.
                let full: Vec<usize> = (0..rd.rank).collect();
                let zg = center_component_group(&rd, &full).group;
                let zmid = center_component_group(&rd, &mid).group;
                let h1_g = h1(&zg, &AbelianHom::identity(&zg)).map_err(|e| anyhow!("{e}"))?;
                let h1_mid = h1(&zmid, &AbelianHom::identity(&zmid)).map_err(|e| anyhow!("{e}"))?;
                let h_g_mid = h_map(&rd, &mid, &full).map_err(|e| anyhow!("{e}"))?;
                let h_mid_m = h_map(&rd, &levi, &mid).map_err(|e| anyhow!("{e}"))?;
                let h_g_m = h_map(&rd, &levi, &full).map_err(|e| anyhow!("{e}"))?;
                let step1 = h1_induced(&h_g_mid, &h1_g, &h1_mid).map_err(|e| anyhow!("{e}"))?;
                let step2 = h1_induced(&h_mid_m, &h1_mid, &label.h1).map_err(|e| anyhow!("{e}"))?;
                let direct = h1_induced(&h_g_m, &h1_g, &label.h1).map_err(|e| anyhow!("{e}"))?;
                let mut ok = true;
                for zel in zg.elements() {
                    let z = h1_g.project(&zel);
                    let (_, lbl_direct) =
                        res_label_map(&rd, &levi, &word, &z, p).map_err(|e| anyhow!("{e}"))?;
                    let routed = step2.apply(&step1.apply(&z));
                    let lbl_via = label.h1.quotient.add(&label.label, &routed);
                    if lbl_direct != lbl_via || direct.apply(&z) != routed {
                        ok = false;
                    }
                }
                via_agrees = Some(ok);
            }
            let out = RestrictOut {
                group: ct.to_string(),
                levi: levi.iter().map(|i| i + 1).collect(),
                twist_word: word.iter().map(|g| format!("s{}", g + 1)).collect(),
                minimal_levi: label.levi_prime.iter().map(|i| i + 1).collect(),
                h1_group: label
                    .h1
                    .quotient
                    .invariant_factors()
                    .iter()
                    .map(|d| d.to_u64().unwrap_or(0))
                    .collect(),
                label_coords: label
                    .label
                    .coords
                    .iter()
                    .map(|c| c.to_u64().unwrap_or(0))
                    .collect(),
                q,
                q_caveat: label.q_caveat.clone(),
                via_agrees,
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
            match via_agrees {
                Some(false) => Ok(1),
                _ => Ok(0),
            }
        }
    }
}
