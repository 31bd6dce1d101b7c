use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kgraph::cp::{self, DefectReport};
use kgraph::delay::{
    bracket_tail_check, delay_path_iso_check, product_delay_compat_check, range_set_check,
    required_base_depth, rout_equivalence_check, unit_delay_iso_check, ProductGenerators,
};
use kgraph::fock::{
    equiv_exprs_check, gamma_matrix_unit_check, iota_tck_check, j_ck_check, tck_check,
};
use kgraph::report::{write_check_csv, ReportRow};
use kgraph::{delay, delayed_min_check, verify_axioms, AxiomReport, Degree, FockSpace, GraphSource, KGraphError};

#[derive(Parser)]
#[command(name = "kgraph", version, about = "Checks for truncated higher-rank graphs and their delays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Category, degree and factorization axioms of a graph file.
    CheckAxioms {
        graph: PathBuf,
        #[arg(long)]
        depth: Option<Degree>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Builds the delay graph and checks it.
    Delay {
        graph: PathBuf,
        #[arg(long)]
        n: Degree,
        #[arg(long)]
        depth: Option<Degree>,
        /// Also compare the closed form for minimal common extensions.
        #[arg(long)]
        verify_min: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Toeplitz-Cuntz-Krieger relations of the truncated Fock representation.
    Tck {
        graph: PathBuf,
        #[arg(long)]
        depth: Option<Degree>,
        #[arg(long)]
        margin: Option<Degree>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relations for the delay inclusion and the operator identities around it.
    Iota {
        graph: PathBuf,
        #[arg(long)]
        n: Degree,
        #[arg(long)]
        depth: Option<Degree>,
        #[arg(long)]
        margin: Option<Degree>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Identities behind the return map.
    Jmap {
        graph: PathBuf,
        #[arg(long)]
        n: Degree,
        #[arg(long)]
        depth: Option<Degree>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prints the weight matrix of size m.
    Kappa {
        #[arg(long)]
        m: u32,
    },
    /// Exact approximation defect against its bound.
    Defect {
        #[arg(long)]
        a: Degree,
        #[arg(long)]
        b: Degree,
        #[arg(long)]
        n: Degree,
    },
    /// Defect table over a list of n, written as CSV.
    Sweep {
        #[arg(long)]
        a: Degree,
        #[arg(long)]
        b: Degree,
        #[arg(long = "n-list", num_args = 0..)]
        n_list: Vec<Degree>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Every applicable suite on each input, plus the numeric checks.
    All {
        #[arg(required = true)]
        graphs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct UsageError(String);

impl From<KGraphError> for UsageError {
    fn from(e: KGraphError) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = Result<T, UsageError>;

/// Collected reports; printed as they arrive and optionally written as CSV.
#[derive(Default)]
struct Session {
    rows: Vec<ReportRow>,
}

impl Session {
    fn record(&mut self, rep: &AxiomReport, instance: &str, n: &str, bound: &str) {
        let status = if rep.passed() { "PASS" } else { "FAIL" };
        let mut head = format!("{status} {} {instance}", rep.check);
        if !n.is_empty() {
            head.push_str(&format!(" n={n}"));
        }
        if !bound.is_empty() {
            head.push_str(&format!(" {bound}"));
        }
        println!("{head} ({} instances)", rep.checked);
        for v in &rep.violations {
            println!("  witness {v}");
        }
        if rep.suppressed > 0 {
            println!("  ... {} more violations", rep.suppressed);
        }
        for note in &rep.notes {
            println!("  note {note}");
        }
        self.rows.push(ReportRow::from_report(rep, instance, n, bound));
    }

    fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    fn finish(&self, out: Option<&Path>) -> CliResult<ExitCode> {
        if let Some(path) = out {
            let mut w = create(path)?;
            write_check_csv(&mut w, &self.rows)?;
            w.flush().map_err(io_error(path))?;
        }
        Ok(if self.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
    }
}

fn io_error(path: &Path) -> impl Fn(std::io::Error) -> UsageError + '_ {
    move |e| UsageError(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(io_error(path))?))
}

struct Input {
    name: String,
    source: GraphSource,
}

impl Input {
    fn load(path: &Path) -> CliResult<Input> {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        let source = GraphSource::parse(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        let name = path.file_name().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        Ok(Input { name, source })
    }

    fn rank(&self) -> usize {
        self.source.rank()
    }

    /// A flag value, or `default` repeated to the input's rank.
    fn degree(&self, flag: &str, value: &Option<Degree>, default: u32) -> CliResult<Degree> {
        match value {
            Some(d) => self.validate(flag, d),
            None => Ok(Degree::splat(self.rank(), default)),
        }
    }

    fn validate(&self, flag: &str, d: &Degree) -> CliResult<Degree> {
        if d.rank() != self.rank() {
            return Err(UsageError(format!(
                "--{flag} {d} has rank {}, but {} has rank {}",
                d.rank(),
                self.name,
                self.rank()
            )));
        }
        Ok(d.clone())
    }

    /// Records the input's validation problems as a failed report.
    fn validation(&self, s: &mut Session) -> bool {
        let problems = self.source.problems();
        if problems.is_empty() {
            return true;
        }
        let mut rep = AxiomReport::new("validate_input");
        for p in problems {
            rep.expect(false, "well-formed", || vec![p]);
        }
        s.record(&rep, &self.name, "", "");
        false
    }
}

fn depth_label(d: &Degree) -> String {
    format!("depth={d}")
}

fn run_check_axioms(input: &Input, depth: &Degree, s: &mut Session) -> CliResult<()> {
    let g = input.source.build(depth)?;
    s.record(&verify_axioms(&g), &input.name, "", &depth_label(depth));
    Ok(())
}

fn run_delay(input: &Input, n: &Degree, depth: &Degree, verify_min: bool, s: &mut Session) -> CliResult<()> {
    let base = input.source.build(&required_base_depth(n, depth)?)?;
    let dg = delay(&base, n, depth)?;
    let g = dg.realized();
    let unit = |i: usize| Degree::new((0..n.rank()).map(|j| u32::from(i == j)).collect());
    println!("delay {} n={n} depth={depth}: {} vertices, {} morphisms", input.name, g.vertices().len(), g.len());
    for i in 0..n.rank() {
        for &m in g.of_degree(&unit(i)) {
            println!("  {} : {} -> {}", g.label(m), g.label(g.source(m)), g.label(g.range(m)));
        }
    }
    if n.rank() == 1 {
        if let Some(k) = single_cycle(g) {
            println!("  shape: {k}-cycle");
        }
    }
    let inst = &input.name;
    let nl = n.to_string();
    s.record(&verify_axioms(g), inst, &nl, &depth_label(depth));
    s.record(&range_set_check(&dg)?, inst, &nl, &depth_label(depth));
    s.record(&bracket_tail_check(&base, n)?, inst, &nl, "");
    if verify_min {
        s.record(&delayed_min_check(&base, n, depth)?, inst, &nl, &format!("bound={depth}"));
    }
    Ok(())
}

/// `Some(k)` when the degree-one edges form one directed cycle through all `k` vertices.
fn single_cycle(g: &kgraph::TruncatedKGraph) -> Option<usize> {
    let edges = g.of_degree(&Degree::from([1]));
    let k = g.vertices().len();
    if edges.len() != k {
        return None;
    }
    let next = |v| edges.iter().find(|&&e| g.source(e) == v).map(|&e| g.range(e));
    let start = *g.vertices().first()?;
    let mut v = start;
    for step in 1..=k {
        v = next(v)?;
        if v == start {
            return (step == k).then_some(k);
        }
    }
    None
}

fn run_tck(input: &Input, depth: &Degree, margin: &Degree, s: &mut Session) -> CliResult<()> {
    let g = input.source.build(depth)?;
    let rep = tck_check(&FockSpace::new(&g), margin)?;
    s.record(&rep, &input.name, "", &format!("depth={depth} margin={margin}"));
    Ok(())
}

/// Parameters for the suites on the delay of a Fock space.
struct FockParams {
    n: Degree,
    depth: Degree,
    margin: Degree,
    equiv_margin: Degree,
    gamma_p: Degree,
    gamma_depth: Degree,
}

impl FockParams {
    /// Desk-scale defaults: the rank-2 matrix-unit and conjugation checks
    /// grow too fast to run at the full depth and margin.
    fn defaults(n: &Degree) -> FockParams {
        let k = n.rank();
        let d = |x: u32| Degree::splat(k, x);
        if k == 1 {
            FockParams {
                n: n.clone(),
                depth: d(6),
                margin: d(2),
                equiv_margin: d(2),
                gamma_p: d(1),
                gamma_depth: d(6),
            }
        } else {
            FockParams {
                n: n.clone(),
                depth: d(4),
                margin: d(2),
                equiv_margin: d(1),
                gamma_p: d(0),
                gamma_depth: n.clone(),
            }
        }
    }
}

fn run_iota(input: &Input, p: &FockParams, s: &mut Session) -> CliResult<()> {
    let reach = p.depth.join(&p.gamma_depth)?;
    let base = input.source.build(&required_base_depth(&p.n, &reach)?)?;
    let nl = p.n.to_string();
    let rep = iota_tck_check(&base, &p.n, &p.depth, &p.margin)?;
    s.record(&rep, &input.name, &nl, &format!("depth={} margin={}", p.depth, p.margin));
    let rep = equiv_exprs_check(&base, &p.n, &p.depth, &p.equiv_margin)?;
    s.record(&rep, &input.name, &nl, &format!("depth={} margin={}", p.depth, p.equiv_margin));
    let rep = gamma_matrix_unit_check(&base, &p.n, &p.gamma_p, &p.gamma_depth)?;
    s.record(&rep, &input.name, &nl, &format!("depth={} p={}", p.gamma_depth, p.gamma_p));
    Ok(())
}

fn run_jmap(input: &Input, n: &Degree, depth: &Degree, s: &mut Session) -> CliResult<()> {
    let base = input.source.build(&required_base_depth(n, depth)?)?;
    s.record(&j_ck_check(&base, n, depth)?, &input.name, &n.to_string(), &depth_label(depth));
    Ok(())
}

fn print_defect(r: &DefectReport) {
    println!(
        "a={} b={} n={} defect={} ({}) bound={} ({}) argmax p={} ok={}",
        r.a,
        r.b,
        r.n,
        r.defect,
        cp::decimal12(r.defect),
        r.bound,
        cp::decimal12(r.bound),
        r.argmax,
        r.within_bound()
    );
}

fn rank2(flag: &str, d: &Degree) -> CliResult<()> {
    if d.rank() != 2 {
        return Err(UsageError(format!("--{flag} {d} must have two coordinates")));
    }
    Ok(())
}

/// The graph-independent numeric checks at desk scale.
fn run_numeric(s: &mut Session) -> CliResult<()> {
    let mut psd = AxiomReport::new("psd_check");
    for m in 1..=24 {
        let ok = cp::psd_check(&cp::kappa(m)?.to_f64())?;
        psd.expect(ok, "kappa", || vec![format!("m={m}")]);
    }
    for n1 in 1..=8 {
        for n2 in 1..=8 {
            let n = Degree::from([n1, n2]);
            let ok = cp::psd_check(&cp::delta(&n)?.to_f64())?;
            psd.expect(ok, "delta", || vec![format!("n={n}")]);
        }
    }
    s.record(&psd, "weights", "", "m<=24 n<=(8,8)");

    let mut schur = AxiomReport::new("schur_contraction_check");
    for n in [[4, 4], [3, 5]] {
        let n = Degree::from(n);
        let r = cp::schur_contraction_check(&cp::delta(&n)?.to_f64(), 100, 1)?;
        schur.expect(r.passed, "contraction", || vec![format!("n={n} ratio={:.12}", r.worst_ratio)]);
    }
    s.record(&schur, "delta", "(4,4) (3,5)", "trials=100");

    let n = Degree::from([4, 4]);
    s.record(&cp::phi_decomposition_check(&n, 1)?, "grid", &n.to_string(), "");

    let mut rep = AxiomReport::new("defect_bound");
    for n in [4, 8, 16] {
        let n = Degree::from([n, n]);
        for a in Degree::from([3, 3]).box_iter() {
            for b in Degree::from([3, 3]).box_iter() {
                let r = cp::defect(&a, &b, &n)?;
                rep.expect(r.within_bound() && (a != b || r.defect == 0.into()), "defect<=bound", || {
                    vec![format!("a={a} b={b} n={n} defect={} bound={}", r.defect, r.bound)]
                });
            }
        }
    }
    s.record(&rep, "a,b<=(3,3)", "(4,4) (8,8) (16,16)", "");
    Ok(())
}

fn run_all(inputs: &[Input], s: &mut Session) -> CliResult<()> {
    let mut digraphs = Vec::new();
    for input in inputs {
        if !input.validation(s) {
            continue;
        }
        let k = input.rank();
        let d = |x: u32| Degree::splat(k, x);
        run_check_axioms(input, &d(4), s)?;
        for n in Degree::splat(k, 2).box_iter() {
            let n = n.checked_add(&d(1))?;
            run_delay(input, &n, &d(2), n == d(2), s)?;
        }
        s.record(&unit_delay_iso_check(&input.source.build(&d(3))?, &d(3))?, &input.name, &d(1).to_string(), &depth_label(&d(3)));
        let fp = FockParams::defaults(&d(2));
        run_tck(input, &fp.depth, &fp.margin, s)?;
        run_iota(input, &fp, s)?;
        run_jmap(input, &fp.n, &fp.depth, s)?;
        if k == 2 {
            let g = input.source.build(&d(6))?;
            let rep = cp::pn_qn_check(&FockSpace::new(&g), &fp.n, &d(1))?;
            s.record(&rep, &input.name, &fp.n.to_string(), "depth=(6,6) bound=(1,1)");
        }
        if let Some(e) = input.source.digraph() {
            for m in 1..=3 {
                s.record(&delay_path_iso_check(e, m, 3)?, &input.name, &m.to_string(), "depth=3");
                s.record(&rout_equivalence_check(e, m, 3)?, &input.name, &m.to_string(), "depth=3");
            }
            digraphs.push(input);
        }
    }
    for (i, a) in digraphs.iter().enumerate() {
        for b in &digraphs[i..] {
            let la = a.source.build(&Degree::from([3]))?;
            let lb = b.source.build(&Degree::from([3]))?;
            let inst = format!("{}x{}", a.name, b.name);
            let two = Degree::from([2]);
            let rep = product_delay_compat_check(&la, &lb, &two, &two, &Degree::from([2, 2]))?;
            s.record(&rep, &inst, "(2,2)", "depth=(2,2)");
            let rep = ProductGenerators::new(&la, &lb, &two, &two)?.sweep(&Degree::from([1, 1]))?;
            s.record(&rep, &inst, "(2,2)", "bound=(1,1)");
        }
    }
    run_numeric(s)
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    let mut s = Session::default();
    match cli.command {
        Command::CheckAxioms { graph, depth, out } => {
            let input = Input::load(&graph)?;
            if input.validation(&mut s) {
                let depth = input.degree("depth", &depth, 4)?;
                run_check_axioms(&input, &depth, &mut s)?;
            }
            s.finish(out.as_deref())
        }
        Command::Delay { graph, n, depth, verify_min, out } => {
            let input = Input::load(&graph)?;
            if input.validation(&mut s) {
                let n = input.validate("n", &n)?;
                let depth = input.degree("depth", &depth, if input.rank() == 1 { 3 } else { 2 })?;
                run_delay(&input, &n, &depth, verify_min, &mut s)?;
            }
            s.finish(out.as_deref())
        }
        Command::Tck { graph, depth, margin, out } => {
            let input = Input::load(&graph)?;
            if input.validation(&mut s) {
                let depth = input.degree("depth", &depth, if input.rank() == 1 { 6 } else { 4 })?;
                let margin = input.degree("margin", &margin, 2)?;
                run_tck(&input, &depth, &margin, &mut s)?;
            }
            s.finish(out.as_deref())
        }
        Command::Iota { graph, n, depth, margin, out } => {
            let input = Input::load(&graph)?;
            if input.validation(&mut s) {
                let mut fp = FockParams::defaults(&input.validate("n", &n)?);
                if let Some(d) = &depth {
                    fp.depth = input.validate("depth", d)?;
                }
                if let Some(m) = &margin {
                    fp.margin = input.validate("margin", m)?;
                    fp.equiv_margin = fp.margin.clone();
                }
                run_iota(&input, &fp, &mut s)?;
            }
            s.finish(out.as_deref())
        }
        Command::Jmap { graph, n, depth, out } => {
            let input = Input::load(&graph)?;
            if input.validation(&mut s) {
                let n = input.validate("n", &n)?;
                let depth = input.degree("depth", &depth, if input.rank() == 1 { 6 } else { 4 })?;
                run_jmap(&input, &n, &depth, &mut s)?;
            }
            s.finish(out.as_deref())
        }
        Command::Kappa { m } => {
            let k = cp::kappa(m)?;
            println!("kappa m={m} Z={}", cp::KappaMatrix::denominator(m));
            for row in k.rows() {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                println!("  {}", cells.join(" "));
            }
            println!("psd={}", cp::psd_check(&k.to_f64())?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Defect { a, b, n } => {
            for (flag, d) in [("a", &a), ("b", &b), ("n", &n)] {
                rank2(flag, d)?;
            }
            let r = cp::defect(&a, &b, &n)?;
            print_defect(&r);
            Ok(if r.within_bound() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Sweep { a, b, n_list, out } => {
            rank2("a", &a)?;
            rank2("b", &b)?;
            for n in &n_list {
                rank2("n-list", n)?;
            }
            let rows = cp::sweep(&a, &b, &n_list)?;
            let mut w = create(&out)?;
            cp::write_sweep_csv(&mut w, &rows)?;
            w.flush().map_err(io_error(&out))?;
            rows.iter().for_each(print_defect);
            Ok(if rows.iter().all(DefectReport::within_bound) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::All { graphs, out } => {
            let inputs: Vec<Input> = graphs.iter().map(|p| Input::load(p)).collect::<CliResult<_>>()?;
            run_all(&inputs, &mut s)?;
            s.finish(out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
