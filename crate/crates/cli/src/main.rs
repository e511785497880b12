//! Command-line front end: classify primes, tabulate the empirical census,
//! print the exact density computation, and run the named check suites.

use clap::{Parser, Subcommand, ValueEnum};
use somos5::agl::affine_image;
use somos5::arith::Rational64;
use somos5::census::{
    classify_prime, density_table, theory_report, verify_suites, CensusError, Method, Suite,
};
use somos5::density::{DensityBracket, DensityReport};
use somos5::divpoly::preimage8_polynomial;

#[derive(Parser)]
#[command(name = "somos5", version, about = "Which primes divide a Somos-5 term, and how often")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact density computation (group orders, verdict tallies,
    /// the headline fraction, and bracketing bounds).
    Theory {
        /// Instead of the report, dump the affine image group at this level
        /// (3 or 4) as CSV rows a,b,c,d,e,f.
        #[arg(long, value_name = "K")]
        dump_group: Option<u32>,
        /// Instead of the report, dump the degree-64 preimage polynomial,
        /// one decimal coefficient per line, degree ascending.
        #[arg(long, conflicts_with = "dump_group")]
        dump_f8: bool,
    },
    /// Classify every prime up to a limit and tabulate the dividing ratio.
    Density {
        /// Upper bound of the census.
        #[arg(long)]
        limit: u64,
        /// Comma-separated report thresholds; defaults to the powers of ten
        /// up to the limit.
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<u64>>,
    },
    /// Decide whether a single prime divides some Somos-5 term.
    Prime { p: u64 },
    /// Run a named suite of self-checks.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Somos,
    Curve,
    Divpoly,
    Group,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Somos => Suite::Somos,
            SuiteArg::Curve => Suite::Curve,
            SuiteArg::Divpoly => Suite::DivPoly,
            SuiteArg::Group => Suite::Group,
            SuiteArg::All => Suite::All,
        }
    }
}

fn frac(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn dec(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Theory { dump_group: Some(k), .. } => dump_group(k),
        Command::Theory { dump_f8: true, .. } => {
            for c in preimage8_polynomial().coeffs() {
                println!("{c}");
            }
            0
        }
        Command::Theory { .. } => theory(cli.format),
        Command::Density { limit, checkpoints } => density(cli.format, limit, checkpoints),
        Command::Prime { p } => prime(cli.format, p),
        Command::Verify { suite } => verify(cli.format, suite.into()),
    }
}

fn dump_group(k: u32) -> i32 {
    if !(3..=4).contains(&k) {
        eprintln!("error: --dump-group supports levels 3 and 4");
        return 2;
    }
    println!("a,b,c,d,e,f");
    for g in affine_image(k).iter() {
        println!("{},{},{},{},{},{}", g.a, g.b, g.c, g.d, g.e, g.f);
    }
    0
}

fn theory(format: Format) -> i32 {
    let report = theory_report();
    let l3 = &report.level3;
    match format {
        Format::Human => {
            println!("matrix image mod 8:    {} elements", report.matrix_image_order);
            println!("affine image level 3:  {} elements", l3.group_order);
            println!(
                "resolved verdicts:     {} good, {} bad, {} undecided (even lower row), {} undecided (odd lower row)",
                l3.good, l3.bad, l3.inconclusive_even, l3.inconclusive_odd
            );
            println!("identity cell measure: {}", frac(l3.identity_measure));
            println!("density:               {} = {:.6}", frac(l3.density), l3.density_f64());
            print_bracket("bracket level 3:      ", &report.bracket3);
            print_bracket("bracket level 4:      ", &report.bracket4);
            println!(
                "affine image level 4:  {} elements, density recomputes to {} = {:.6}",
                report.level4.group_order,
                frac(report.level4.density),
                report.level4.density_f64()
            );
            println!(
                "frattini subgroup:     {} elements, contains deep cosets: {}",
                report.frattini_order, report.frattini_contains_deep_cosets
            );
            println!("reduction kernel:      {} elements", report.reduction_kernel_order);
        }
        Format::Csv => {
            println!("key,value");
            println!("matrix_image_order,{}", report.matrix_image_order);
            print_report_csv("level3", l3);
            print_report_csv("level4", &report.level4);
            println!("bracket3_lower,{}", frac(report.bracket3.lower));
            println!("bracket3_upper,{}", frac(report.bracket3.upper));
            println!("bracket4_lower,{}", frac(report.bracket4.lower));
            println!("bracket4_upper,{}", frac(report.bracket4.upper));
            println!("frattini_order,{}", report.frattini_order);
            println!("frattini_contains_deep_cosets,{}", report.frattini_contains_deep_cosets);
            println!("reduction_kernel_order,{}", report.reduction_kernel_order);
        }
        Format::Json => {
            let value = serde_json::json!({
                "matrix_image_order": report.matrix_image_order,
                "level3": report_json(l3),
                "level4": report_json(&report.level4),
                "bracket3": bracket_json(&report.bracket3),
                "bracket4": bracket_json(&report.bracket4),
                "frattini_order": report.frattini_order,
                "frattini_contains_deep_cosets": report.frattini_contains_deep_cosets,
                "reduction_kernel_order": report.reduction_kernel_order,
            });
            println!("{value}");
        }
    }
    0
}

fn print_bracket(label: &str, b: &DensityBracket) {
    println!(
        "{label} [{}, {}] = [{:.6}, {:.6}]",
        frac(b.lower),
        frac(b.upper),
        dec(b.lower),
        dec(b.upper)
    );
}

fn print_report_csv(prefix: &str, r: &DensityReport) {
    println!("{prefix}_group_order,{}", r.group_order);
    println!("{prefix}_good,{}", r.good);
    println!("{prefix}_bad,{}", r.bad);
    println!("{prefix}_inconclusive_even,{}", r.inconclusive_even);
    println!("{prefix}_inconclusive_odd,{}", r.inconclusive_odd);
    println!("{prefix}_identity_measure,{}", frac(r.identity_measure));
    println!("{prefix}_density,{}", frac(r.density));
    println!("{prefix}_density_decimal,{:.6}", r.density_f64());
}

fn report_json(r: &DensityReport) -> serde_json::Value {
    serde_json::json!({
        "group_order": r.group_order,
        "good": r.good,
        "bad": r.bad,
        "inconclusive_even": r.inconclusive_even,
        "inconclusive_odd": r.inconclusive_odd,
        "identity_measure": frac(r.identity_measure),
        "density": frac(r.density),
        "density_decimal": r.density_f64(),
    })
}

fn bracket_json(b: &DensityBracket) -> serde_json::Value {
    serde_json::json!({
        "lower": frac(b.lower),
        "upper": frac(b.upper),
        "lower_decimal": dec(b.lower),
        "upper_decimal": dec(b.upper),
    })
}

fn density(format: Format, limit: u64, checkpoints: Option<Vec<u64>>) -> i32 {
    let thresholds = checkpoints.unwrap_or_else(|| default_checkpoints(limit));
    if thresholds.is_empty() {
        eprintln!("error: no checkpoints");
        return 2;
    }
    if let Some(&too_big) = thresholds.iter().find(|&&x| x > limit) {
        eprintln!("error: checkpoint {too_big} exceeds --limit {limit}");
        return 2;
    }
    let rows = density_table(&thresholds);
    match format {
        Format::Human => {
            println!("{:>12} {:>9} {:>9} {:>10}", "x", "pi", "pi'", "ratio");
            for r in &rows {
                println!("{:>12} {:>9} {:>9} {:>10.6}", r.x, r.pi, r.pi_prime, r.ratio);
            }
        }
        Format::Csv => {
            println!("x,pi,pi_prime,ratio");
            for r in &rows {
                println!("{},{},{},{:.6}", r.x, r.pi, r.pi_prime, r.ratio);
            }
        }
        Format::Json => {
            println!("{}", serde_json::to_string(&rows).expect("serializable"));
        }
    }
    0
}

fn default_checkpoints(limit: u64) -> Vec<u64> {
    let mut v = Vec::new();
    let mut x = 10u64;
    while x <= limit {
        v.push(x);
        x = x.saturating_mul(10);
    }
    if v.last() != Some(&limit) {
        v.push(limit);
    }
    v
}

fn prime(format: Format, p: u64) -> i32 {
    let c = match classify_prime(p) {
        Ok(c) => c,
        Err(CensusError::NotPrime(p)) => {
            eprintln!("error: {p} is not prime");
            return 1;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    match format {
        Format::Human => {
            let verdict = if c.divides { "divides some Somos-5 term" } else { "divides no Somos-5 term" };
            println!("prime {}: {verdict}", c.p);
            match c.method {
                Method::CurveOrder => {
                    println!("  method: curve point orders");
                    println!("  ord(P mod p) = {}", c.ord_p.expect("curve route"));
                    println!("  ord(R mod p) = {}", c.ord_r.expect("curve route"));
                }
                Method::DirectScan => {
                    println!("  method: direct scan of one full cycle mod p");
                }
            }
        }
        Format::Csv => {
            println!("p,method,ord_P,ord_R,divides");
            println!(
                "{},{:?},{},{},{}",
                c.p,
                c.method,
                c.ord_p.map(|o| o.to_string()).unwrap_or_default(),
                c.ord_r.map(|o| o.to_string()).unwrap_or_default(),
                c.divides
            );
        }
        Format::Json => {
            println!("{}", serde_json::to_string(&c).expect("serializable"));
        }
    }
    0
}

fn verify(format: Format, suite: Suite) -> i32 {
    let results = verify_suites(suite);
    let failed = results.iter().filter(|r| !r.pass).count();
    match format {
        Format::Human => {
            for r in &results {
                println!("{} {}", if r.pass { "ok  " } else { "FAIL" }, r.name);
            }
            println!("{} checks, {} passed, {} failed", results.len(), results.len() - failed, failed);
        }
        Format::Csv => {
            println!("name,pass");
            for r in &results {
                println!("{},{}", r.name, r.pass);
            }
        }
        Format::Json => {
            println!("{}", serde_json::to_string(&results).expect("serializable"));
        }
    }
    i32::from(failed > 0)
}
