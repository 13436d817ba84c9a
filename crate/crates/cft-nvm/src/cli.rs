//! The `cft-nvm` command line.
//!
//! Exit codes: 0 on success, 1 when a verification disagrees (brute force against a
//! criterion, or a witness that fails its own checks), 2 on usage, input or IO errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cft_nvm_core::characters::{extensions, subgroup_of_index, SubgroupChar};
use cft_nvm_core::cyclotomic::{max_order, set_max_order};
use cft_nvm_core::finite_field::{FieldError, FieldSpec};
use cft_nvm_core::nvm::{
    chebotarev_check, nvm_brute, nvm_instance, violation_witness, CharSelector, Method, NvmError,
};
use cft_nvm_core::ntheory::binomial;
use cft_nvm_core::transform::{cft_matrix_canonical, gauss_set, support, t_sums};

use crate::format::{
    add_char_json, approx_json, cft_to_json, elements_json, exact_with_approx, field_to_json,
    group_algebra_json, mult_char_json, polynomial_text, report_to_json, reports_table,
    subgroup_char_json, uncertainty_json, write_reports_csv, write_reports_jsonl, FormatError,
};
use crate::scan::{required_order, run_scan};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREEMENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the cyclotomic order cap.
pub const MAX_ORDER_ENV: &str = "CFT_NVM_MAX_ORDER";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Pretty JSON; JSON lines for `scan`.
    Json,
    Csv,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "cft-nvm", version, about = "Compressed Fourier transforms and the NVM property over finite fields")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Worker threads for scans (0 uses all cores).
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Field size, a prime power.
    #[arg(long)]
    pub q: Option<u64>,
    /// Characteristic; with `--m`, an alternative to `--q`.
    #[arg(long)]
    pub p: Option<u64>,
    /// Extension degree.
    #[arg(long)]
    pub m: Option<u32>,
}

#[derive(Debug, Args)]
pub struct CharArgs {
    #[arg(long)]
    pub q: u64,
    /// Index `s` of the subgroup `H` in the multiplicative group.
    #[arg(long)]
    pub index: u32,
    /// Exponent `j` of the character on `H`, `0 <= j < |H|`.
    #[arg(long, default_value_t = 0)]
    pub chi: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the field: modulus, generator, trace and log tables.
    Field(FieldArgs),
    /// Gauss sums of the extensions of a subgroup character.
    Gauss(CharArgs),
    /// The compressed Fourier matrix with canonical representatives.
    Cft(CharArgs),
    /// Decide NVM for one instance.
    Nvm {
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long, default_value = "both")]
        method: MethodArg,
    },
    /// Check every minor of the p-point DFT matrix.
    Chebotarev {
        #[arg(long)]
        p: u64,
    },
    /// Decide NVM for every instance up to a field size.
    Scan {
        #[arg(long)]
        q_max: u64,
        #[arg(long)]
        index: u32,
        #[arg(long, default_value = "all")]
        chars: CharsArg,
    },
    /// Emit an element violating the uncertainty bound when NVM fails.
    Witness(CharArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Brute,
    Theorem,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Brute => Method::Brute,
            MethodArg::Theorem => Method::Theorem,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CharsArg {
    Trivial,
    Nontrivial,
    All,
}

impl From<CharsArg> for CharSelector {
    fn from(c: CharsArg) -> Self {
        match c {
            CharsArg::Trivial => CharSelector::Trivial,
            CharsArg::Nontrivial => CharSelector::Nontrivial,
            CharsArg::All => CharSelector::All,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => EXIT_DISAGREEMENT,
            _ => EXIT_USAGE,
        }
    }
}

fn order_cap_error(needed: u64, cap: u64) -> CliError {
    CliError::Usage(format!(
        "needs cyclotomic order {needed}, above the cap {cap}; raise it with {MAX_ORDER_ENV}"
    ))
}

fn ensure_order(needed: u64) -> Result<(), CliError> {
    let cap = u64::from(max_order());
    if needed > cap {
        return Err(order_cap_error(needed, cap));
    }
    Ok(())
}

impl From<NvmError> for CliError {
    fn from(e: NvmError) -> Self {
        match e {
            NvmError::WitnessVerification(_) => CliError::Verification(e.to_string()),
            NvmError::CapExceeded { value, cap } if cap == u64::from(max_order()) => order_cap_error(value, cap),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Usage(e.to_string())
            }
        }
    )*};
}

usage_from!(
    FieldError,
    cft_nvm_core::characters::CharError,
    cft_nvm_core::transform::TransformError,
    cft_nvm_core::cyclotomic::CycError
);

/// A command's result: the rendered output and the exit code it implies.
struct Rendered {
    text: String,
    code: i32,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Rendered { text, code: EXIT_OK }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(FormatError::from)?;
    for r in rows {
        w.write_record(r).map_err(FormatError::from)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn table_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut s = line(header.to_vec());
    for r in rows {
        s.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    s
}

/// Either pretty JSON or a header and rows shared by CSV and table output.
fn render(format: Format, json: &Value, header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(pretty(json)),
        Format::Csv => csv_text(header, rows),
        Format::Table => Ok(table_text(header, rows)),
    }
}

fn coeff_cell(x: &cft_nvm_core::cyclotomic::CycNum) -> String {
    format!("{}:{}", x.order(), x.coefficient_strings().join(";"))
}

fn approx_cells(x: &cft_nvm_core::cyclotomic::CycNum) -> [String; 2] {
    let a = approx_json(x);
    [a["re"].to_string(), a["im"].to_string()]
}

fn resolve_field(args: &FieldArgs) -> Result<FieldSpec, CliError> {
    let field = match (args.q, args.p, args.m) {
        (Some(q), None, None) => FieldSpec::of_order(q)?,
        (None, Some(p), Some(m)) => FieldSpec::new(p, m)?,
        (Some(q), Some(p), Some(m)) => {
            let f = FieldSpec::of_order(q)?;
            if u64::from(f.p()) != p || f.m() != m {
                return Err(CliError::Usage(format!("--p {p} --m {m} does not describe GF({q})")));
            }
            f
        }
        _ => return Err(CliError::Usage("give --q, or both --p and --m".into())),
    };
    Ok(field)
}

/// The field and character, after checking the order cap; `gauss` when Gauss sums are
/// computed.
fn character(args: &CharArgs, gauss: bool) -> Result<(FieldSpec, SubgroupChar), CliError> {
    let field = FieldSpec::of_order(args.q)?;
    let sub = subgroup_of_index(&field, args.index)?;
    if args.chi >= sub.order() {
        return Err(CliError::Usage(format!(
            "--chi {} must be below |H| = {}",
            args.chi,
            sub.order()
        )));
    }
    ensure_order(required_order(field.p(), field.q(), args.index, args.chi, gauss))?;
    Ok((field, SubgroupChar::new(sub, i64::from(args.chi))))
}

fn cmd_field(args: &FieldArgs, format: Format) -> Result<Rendered, CliError> {
    let field = resolve_field(args)?;
    let header = ["element", "coeffs", "trace", "log"];
    let rows: Vec<Vec<String>> = field
        .elements()
        .map(|x| {
            let coeffs: Vec<String> = field.coeffs(x).iter().map(u32::to_string).collect();
            vec![
                x.index().to_string(),
                coeffs.join(";"),
                field.trace(x).to_string(),
                field.discrete_log(x).map_or(String::new(), |t| t.to_string()),
            ]
        })
        .collect();
    let text = match format {
        Format::Table => format!(
            "GF({}) = GF({})[x] / ({})\ngenerator: {}\n{}",
            field.q(),
            field.p(),
            polynomial_text(field.modulus()),
            field.generator().index(),
            table_text(&header, &rows)
        ),
        _ => render(format, &field_to_json(&field, true), &header, &rows)?,
    };
    Ok(Rendered::ok(text))
}

fn cmd_gauss(args: &CharArgs, format: Format) -> Result<Rendered, CliError> {
    let (field, chi) = character(args, true)?;
    let g = gauss_set(&field, &chi)?;
    let exts = extensions(&field, &chi);
    let header = ["name", "character", "exact", "re", "im"];
    let mut rows = Vec::new();
    let mut sums = Vec::new();
    for (i, (phi, gi)) in exts.iter().zip(g.sums()).enumerate() {
        let norm_ok = (gi * &gi.conjugate()) == cft_nvm_core::cyclotomic::CycNum::from_i64(1, i64::from(field.q()));
        let mut v = exact_with_approx(gi);
        v["i"] = json!(i);
        v["character"] = mult_char_json(phi);
        v["norm_is_q"] = json!(norm_ok);
        sums.push(v);
        let [re, im] = approx_cells(gi);
        rows.push(vec![format!("G{i}"), format!("k={}", phi.exponent()), coeff_cell(gi), re, im]);
    }
    let mut out = json!({
        "q": field.q(),
        "chi": subgroup_char_json(&chi),
        "psi": add_char_json(&cft_nvm_core::characters::AddCharacter::canonical(&field)),
        "gauss_sums": sums,
        "all_equal": g.all_equal(),
    });
    if args.index == 3 {
        let t = t_sums(&g)?;
        let ts: Vec<Value> = t
            .as_array()
            .iter()
            .enumerate()
            .map(|(j, tj)| {
                let mut v = exact_with_approx(tj);
                v["j"] = json!(j);
                v
            })
            .collect();
        for (j, tj) in t.as_array().iter().enumerate() {
            let [re, im] = approx_cells(tj);
            rows.push(vec![format!("T{j}"), String::new(), coeff_cell(tj), re, im]);
        }
        out["t_sums"] = Value::Array(ts);
    }
    Ok(Rendered::ok(render(format, &out, &header, &rows)?))
}

fn cmd_cft(args: &CharArgs, format: Format) -> Result<Rendered, CliError> {
    let (field, chi) = character(args, false)?;
    let m = cft_matrix_canonical(&field, &chi)?;
    let header = ["s", "r", "exact", "re", "im"];
    let mut rows = Vec::new();
    for (i, s) in m.s().iter().enumerate() {
        for (j, r) in m.r().iter().enumerate() {
            let e = m.entry(i, j);
            let [re, im] = approx_cells(e);
            rows.push(vec![s.index().to_string(), r.index().to_string(), coeff_cell(e), re, im]);
        }
    }
    Ok(Rendered::ok(render(format, &cft_to_json(&m), &header, &rows)?))
}

fn reports_text(format: Format, reports: &[cft_nvm_core::nvm::NvmReport], jsonl: bool) -> Result<String, CliError> {
    let mut buf = Vec::new();
    match format {
        Format::Json if jsonl => write_reports_jsonl(&mut buf, reports)?,
        Format::Json => {
            return Ok(pretty(&report_to_json(&reports[0])));
        }
        Format::Csv => write_reports_csv(&mut buf, reports)?,
        Format::Table => return Ok(reports_table(reports)),
    }
    Ok(String::from_utf8(buf).expect("report output is utf-8"))
}

fn cmd_nvm(args: &CharArgs, method: Method, format: Format) -> Result<Rendered, CliError> {
    let (field, _) = character(args, method != Method::Brute)?;
    let report = nvm_instance(&field, args.index, args.chi, method)?;
    let code = if report.agreement == Some(false) {
        EXIT_DISAGREEMENT
    } else {
        EXIT_OK
    };
    Ok(Rendered {
        text: reports_text(format, std::slice::from_ref(&report), false)?,
        code,
    })
}

fn cmd_chebotarev(p: u64, format: Format) -> Result<Rendered, CliError> {
    ensure_order(p)?;
    let scan = chebotarev_check(p)?;
    let expected = binomial(2 * p, p);
    let witness = scan
        .witness
        .as_ref()
        .map_or(Value::Null, |w| json!({ "I": w.rows, "J": w.cols }));
    let out = json!({
        "p": p,
        "holds": scan.holds,
        "witness": witness,
        "minors_checked": scan.minors_checked,
        "expected_minors": expected,
    });
    let header = ["p", "holds", "minors_checked", "expected_minors"];
    let rows = vec![vec![
        p.to_string(),
        scan.holds.to_string(),
        scan.minors_checked.to_string(),
        expected.to_string(),
    ]];
    // every prime satisfies the property, so a failure is a verification error
    let code = if scan.holds && scan.minors_checked == expected {
        EXIT_OK
    } else {
        EXIT_DISAGREEMENT
    };
    Ok(Rendered {
        text: render(format, &out, &header, &rows)?,
        code,
    })
}

fn cmd_scan(
    q_max: u64,
    index: u32,
    chars: CharSelector,
    format: Format,
    threads: usize,
    stderr: &mut dyn Write,
) -> Result<Rendered, CliError> {
    let out = run_scan(q_max, index, chars, threads)?;
    writeln!(stderr, "{}", out.summary.line())?;
    let code = if out.summary.disagreements > 0 {
        EXIT_DISAGREEMENT
    } else {
        EXIT_OK
    };
    Ok(Rendered {
        text: reports_text(format, &out.reports, true)?,
        code,
    })
}

fn cmd_witness(args: &CharArgs, format: Format) -> Result<Rendered, CliError> {
    let (field, chi) = character(args, false)?;
    let m = cft_matrix_canonical(&field, &chi)?;
    let scan = nvm_brute(m.matrix())?;
    let Some(minor) = scan.witness.filter(|_| !scan.holds) else {
        let out = json!({
            "q": field.q(),
            "chi": subgroup_char_json(&chi),
            "holds": true,
            "message": "NVM holds",
            "minors_checked": scan.minors_checked,
        });
        let text = match format {
            Format::Json => pretty(&out),
            _ => "NVM holds\n".to_string(),
        };
        return Ok(Rendered::ok(text));
    };
    let w = violation_witness(&field, &m, &minor)?;
    let u = &w.uncertainty;
    let supp = support(&w.f, &field);
    let supp_hat = cft_nvm_core::transform::support_hat(&w.f, &field)?;
    let hat_idx: Vec<u32> = supp_hat.iter().map(|a| a.parameter().index()).collect();
    let out = json!({
        "q": field.q(),
        "chi": subgroup_char_json(&chi),
        "holds": false,
        "minor": { "I": minor.rows, "J": minor.cols },
        "f": group_algebra_json(&w.f),
        "support": elements_json(&supp),
        "support_hat": hat_idx,
        "transform_zeros": elements_json(&w.zeros),
        "uncertainty": uncertainty_json(u),
    });
    let text = match format {
        Format::Json => pretty(&out),
        _ => {
            let header = ["element", "f"];
            let rows: Vec<Vec<String>> = field
                .elements()
                .map(|x| vec![x.index().to_string(), coeff_cell(w.f.get(x))])
                .collect();
            let body = if format == Format::Csv {
                csv_text(&header, &rows)?
            } else {
                table_text(&header, &rows)
            };
            format!(
                "{}NVM fails: |supp f| + |supp f^| = {} + {} = {} < {} ({:?})\n",
                body,
                u.support,
                u.support_hat,
                u.support + u.support_hat,
                u.bound,
                u.case
            )
        }
    };
    Ok(Rendered::ok(text))
}

fn apply_env() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(MAX_ORDER_ENV) {
        let cap: u32 = v
            .trim()
            .parse()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| CliError::Usage(format!("{MAX_ORDER_ENV} must be a positive integer, got {v:?}")))?;
        set_max_order(cap);
    }
    Ok(())
}

fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<Rendered, CliError> {
    apply_env()?;
    let f = cli.format;
    match &cli.command {
        Command::Field(a) => cmd_field(a, f),
        Command::Gauss(a) => cmd_gauss(a, f),
        Command::Cft(a) => cmd_cft(a, f),
        Command::Nvm { chi, method } => cmd_nvm(chi, (*method).into(), f),
        Command::Chebotarev { p } => cmd_chebotarev(*p, f),
        Command::Scan { q_max, index, chars } => cmd_scan(*q_max, *index, (*chars).into(), f, cli.threads, stderr),
        Command::Witness(a) => cmd_witness(a, f),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
            } else {
                let _ = write!(stdout, "{}", e.render());
            }
            return code;
        }
    };
    let result = execute(&cli, stderr).and_then(|r| {
        match &cli.out {
            Some(path) => std::fs::write(path, &r.text)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
            None => stdout.write_all(r.text.as_bytes())?,
        }
        Ok(r.code)
    });
    match result {
        Ok(code) => {
            if code == EXIT_DISAGREEMENT {
                let _ = writeln!(stderr, "error: verification disagreement");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
