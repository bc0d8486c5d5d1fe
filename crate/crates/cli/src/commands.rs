use std::f64::consts::PI;

use num_complex::Complex64;
use qes_core::algebra::{MPoly, Rat};
use qes_core::lab::{
    default_probe_grid, favard_check_with, generate_sequence, gram_matrix, moments_from_sequence,
    probe_orthogonality, truncation_scan, FavardOptions, GramMatrix, LabError, MomentFunctional,
    OrthogonalityProbe,
};
use qes_core::models::{
    bhaduri_radial_problem, build_bhaduri_ode_sym, build_kink_heun_ode, build_kink_t_ode, diff_recurrences,
    kink_potential, kink_potential_complex, kink_qes_states, periodic_potential, printed_bhaduri,
    printed_kink_even, printed_kink_odd, printed_kink_q, reconstruct_wavefunction, sym_eps2, sym_s, CoeffDiff,
    KinkParams, QesState, System,
};
use qes_core::numerics::{
    build_hamiltonian, eigenvector_tridiagonal, pointwise_residual, richardson_refine, sign_changes,
    tridiagonal_eigenvalues, Boundary, Grid, ResidualReport, Spectrum, SymMatrix, Tolerances,
};
use qes_core::ode::{derive_recurrence, parity_decouple, Recurrence, SeriesAnsatz};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::families::DeriveModel;
use crate::output::{csv_field, num, Artifact, CliError};
use crate::{
    AntiisoArgs, Bc, DeriveArgs, FavardArgs, GramArgs, Potential, RadialArgs, ResidualArgs, ScalingArg,
    SequenceArgs, SpectrumArgs, SystemArg, TruncateArgs,
};

#[derive(Debug, Serialize, Deserialize)]
pub struct Sectors {
    pub even: Recurrence,
    pub odd: Recurrence,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DeriveResult {
    pub recurrence: Recurrence,
    pub display: String,
    pub factored: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sectors: Option<Sectors>,
    /// `derived − printed` per differing coefficient.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub printed_diff: Option<Vec<CoeffDiff>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector_diffs: Option<[Vec<CoeffDiff>; 2]>,
}

fn recurrence_csv(r: &Recurrence) -> String {
    let mut s = String::from("j,label,coefficient,factored\n");
    for (j, (c, f)) in r.coeffs.iter().zip(r.factored()).enumerate() {
        s.push_str(&format!("{j},{},{},{}\n", r.label(j), csv_field(&c.to_string()), csv_field(&f)));
    }
    s
}

pub fn derive(a: &DeriveArgs) -> Result<Artifact, CliError> {
    let spectral = a.spectral.clone().unwrap_or_else(|| a.model.default_spectral().to_string());
    let ansatz = match a.scaling {
        ScalingArg::Plain => SeriesAnsatz::plain("n"),
        ScalingArg::Factorial => SeriesAnsatz::factorial("n"),
    };
    let ode = match a.model {
        DeriveModel::KinkT => build_kink_t_ode(&sym_s(), &sym_eps2()),
        DeriveModel::KinkHeun => build_kink_heun_ode(&sym_s(), &sym_eps2()),
        DeriveModel::Bhaduri => build_bhaduri_ode_sym(&MPoly::var("a"), &MPoly::var("b"), &MPoly::var("c"), "beta"),
    };
    if !ode.parameters().contains(&spectral) {
        return Err(CliError::usage(format!(
            "--spectral {spectral} is not a parameter of the ODE ({})",
            ode.parameters().join(", ")
        )));
    }
    let symbolic = derive_recurrence(&ode, &ansatz, &spectral)?;
    let b = a.bind.for_recurrence(&symbolic)?;
    let rec = symbolic.substitute(&b);

    let sectors = if a.sectors {
        let (even, odd) = parity_decouple(&rec, "m")?;
        Some(Sectors { even, odd })
    } else {
        None
    };
    let (mut printed_diff, mut sector_diffs) = (None, None);
    if a.compare_printed {
        if a.scaling != ScalingArg::Factorial || spectral != a.model.default_spectral() {
            return Err(CliError::usage("--compare-printed needs factorial scaling and the default spectral variable"));
        }
        let printed = match a.model {
            DeriveModel::KinkT => printed_kink_q(),
            DeriveModel::Bhaduri => printed_bhaduri(),
            DeriveModel::KinkHeun => return Err(CliError::usage("no printed recurrence for kink-heun")),
        }
        .substitute(&b);
        printed_diff = Some(diff_recurrences(&rec, &printed));
        if let Some(s) = &sectors {
            sector_diffs = Some([
                diff_recurrences(&s.even, &printed_kink_even().substitute(&b)),
                diff_recurrences(&s.odd, &printed_kink_odd().substitute(&b)),
            ]);
        }
    }
    let params = json!({
        "model": model_name(a.model),
        "spectral": spectral,
        "scaling": if a.scaling == ScalingArg::Plain { "plain" } else { "factorial" },
        "sectors": a.sectors,
        "compare_printed": a.compare_printed,
        "bindings": a.bind.to_json(),
    });
    let csv = recurrence_csv(&rec);
    let result = DeriveResult {
        display: rec.to_string(),
        factored: rec.factored(),
        recurrence: rec,
        sectors,
        printed_diff,
        sector_diffs,
    };
    Ok(Artifact::new(params, &result, csv))
}

fn model_name(m: DeriveModel) -> &'static str {
    match m {
        DeriveModel::KinkT => "kink-t",
        DeriveModel::KinkHeun => "kink-heun",
        DeriveModel::Bhaduri => "bhaduri",
    }
}

pub fn favard(a: &FavardArgs) -> Result<Artifact, CliError> {
    let rec = a.model.recurrence()?;
    let b = a.bind.for_recurrence(&rec)?;
    let report = favard_check_with(&rec, &b, a.n_max, FavardOptions { strict_c1: a.strict_c1 })?;
    let mut csv = String::from("n,code,detail\n");
    for v in &report.violations {
        let code = serde_json::to_value(v.code).expect("code");
        csv.push_str(&format!("{},{},{}\n", v.n, code.as_str().unwrap_or(""), csv_field(&v.detail)));
    }
    let params = json!({
        "model": a.model.name(),
        "n_max": a.n_max,
        "strict_c1": a.strict_c1,
        "bindings": a.bind.to_json(),
    });
    Ok(Artifact::new(params, &report, csv))
}

pub fn sequence(a: &SequenceArgs) -> Result<Artifact, CliError> {
    let rec = a.model.recurrence()?;
    let b = a.bind.for_recurrence(&rec)?;
    let seq = generate_sequence(&rec, &b, a.n_max)?;
    let params = json!({ "model": a.model.name(), "n_max": a.n_max, "bindings": a.bind.to_json() });
    let csv = seq.to_csv();
    Ok(Artifact::new(params, &seq, csv))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GramResult {
    /// `sequence` when `L[P_0] = 1, L[P_n] = 0` fixes every moment,
    /// `padded` when degree defects force the free-moment probe.
    pub functional: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moments: Option<MomentFunctional>,
    pub gram: GramMatrix,
    pub diagonal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<OrthogonalityProbe>,
}

pub fn gram(a: &GramArgs) -> Result<Artifact, CliError> {
    if a.size == 0 {
        return Err(CliError::usage("--size must be positive"));
    }
    let rec = a.model.recurrence()?;
    let b = a.bind.for_recurrence(&rec)?;
    let n_max = a.n_max.unwrap_or(2 * a.size).max(a.size - 1);
    let seq = generate_sequence(&rec, &b, n_max)?;
    let result = match moments_from_sequence(&seq) {
        Ok(l) => {
            // gram_matrix reports INSUFFICIENT_MOMENTS for a short sequence
            let g = gram_matrix(&seq, &l, a.size)?;
            GramResult {
                functional: "sequence".into(),
                diagonal: g.is_diagonal(),
                moments: Some(l),
                gram: g,
                probe: None,
            }
        }
        Err(LabError::DegreeDefect { .. }) => {
            let probe = probe_orthogonality(&seq, a.size, &default_probe_grid())?;
            GramResult {
                functional: "padded".into(),
                moments: None,
                gram: probe.base_gram.clone(),
                diagonal: probe.orthogonal_functional_found(),
                probe: Some(probe),
            }
        }
        Err(e) => return Err(e.into()),
    };
    let mut csv = String::from("i");
    for j in 0..a.size {
        csv.push_str(&format!(",g{j}"));
    }
    csv.push('\n');
    for (i, row) in result.gram.entries.iter().enumerate() {
        csv.push_str(&i.to_string());
        for v in row {
            csv.push_str(&format!(",{v}"));
        }
        csv.push('\n');
    }
    let params = json!({
        "model": a.model.name(),
        "size": a.size,
        "n_max": n_max,
        "bindings": a.bind.to_json(),
    });
    Ok(Artifact::new(params, &result, csv))
}

pub fn truncate(a: &TruncateArgs) -> Result<Artifact, CliError> {
    let rec = a.model.recurrence()?;
    let b = a.bind.for_recurrence(&rec)?;
    let res = truncation_scan(&rec, &b, a.m_max, &a.lo, &a.hi)?;
    let mut csv = String::from("m,kind,value,approx\n");
    for r in &res.records {
        for q in &r.qes_points {
            csv.push_str(&format!("{},exact,{q},{}\n", r.m, num(q.to_f64())));
        }
        for c in &r.numeric_only {
            csv.push_str(&format!("{},numeric,[{}; {}],{}\n", r.m, c.interval.lo, c.interval.hi, num(c.approx)));
        }
    }
    let params = json!({
        "model": a.model.name(),
        "m_max": a.m_max,
        "lo": a.lo.to_string(),
        "hi": a.hi.to_string(),
        "bindings": a.bind.to_json(),
    });
    Ok(Artifact::new(params, &res, csv))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub spectrum: Spectrum,
    /// Unextrapolated spectra on the `h` and `h/2` grids.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unrefined: Option<[Spectrum; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<usize>>,
    /// Radial problem: `E = λ/2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energies: Option<Vec<f64>>,
}

fn kink_params(mu: f64, eps2: &Rat) -> Result<KinkParams, CliError> {
    Ok(KinkParams::new(mu, eps2.clone())?)
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Artifact, CliError> {
    let tol = Tolerances::default();
    let kp = kink_params(a.mu, &a.eps2)?;
    let radial = match a.potential {
        Potential::Radial => {
            let beta = a.beta.ok_or_else(|| CliError::usage("--potential radial needs --beta"))?;
            Some(bhaduri_radial_problem(beta, a.l.unwrap_or(10.0))?)
        }
        _ if a.beta.is_some() => return Err(CliError::usage("--beta applies to --potential radial only")),
        _ => None,
    };
    let (lo, hi, default_bc) = match a.potential {
        Potential::Kink => {
            let l = a.l.unwrap_or(25.0);
            (-l, l, Bc::Dirichlet)
        }
        Potential::Periodic => (0.0, a.l.unwrap_or(4.0 * PI / a.mu), Bc::Periodic),
        Potential::Radial => (0.0, radial.expect("radial").r_max, Bc::Dirichlet),
        Potential::Zero => (0.0, a.l.unwrap_or(PI), Bc::Dirichlet),
    };
    let bc = a.bc.unwrap_or(default_bc);
    if a.nodes && bc != Bc::Dirichlet {
        return Err(CliError::usage("--nodes needs Dirichlet boundary conditions"));
    }
    let boundary = match bc {
        Bc::Dirichlet => Boundary::Dirichlet,
        Bc::Periodic => Boundary::Periodic,
    };
    let grid = Grid::new(lo, hi, a.n, boundary)?;
    let v: Box<dyn Fn(f64) -> f64> = match a.potential {
        Potential::Kink => Box::new(|x| kink_potential(x, &kp)),
        Potential::Periodic => Box::new(|x| periodic_potential(x, &kp)),
        Potential::Radial => {
            let rp = radial.expect("radial");
            Box::new(move |r| rp.potential(r))
        }
        Potential::Zero => Box::new(|_| 0.0),
    };
    let tag = match a.potential {
        Potential::Kink => "kink",
        Potential::Periodic => "periodic",
        Potential::Radial => "radial",
        Potential::Zero => "zero",
    };
    let coarse = Spectrum::compute(&v, &grid, tag, a.k, &tol)?;
    let (spectrum, unrefined, final_grid) = if a.richardson {
        let fine_grid = grid.halved();
        let fine = Spectrum::compute(&v, &fine_grid, tag, a.k, &tol)?;
        (richardson_refine(&coarse, &fine, &tol)?, Some([coarse, fine]), fine_grid)
    } else {
        (coarse, None, grid)
    };
    let nodes = if a.nodes {
        let SymMatrix::Tridiagonal { diag, off } = build_hamiltonian(&v, &final_grid)? else {
            unreachable!("Dirichlet grids give tridiagonal matrices")
        };
        let raw = tridiagonal_eigenvalues(&diag, &off, a.k, tol.bisection_abs);
        Some(
            raw.iter()
                .map(|&e| sign_changes(&eigenvector_tridiagonal(&diag, &off, e, &tol), tol.node_threshold))
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };
    let energies = radial.map(|rp| spectrum.eigenvalues.iter().map(|&l| rp.energy_from_eigenvalue(l)).collect::<Vec<_>>());
    let mut csv = String::from("k,eigenvalue");
    if nodes.is_some() {
        csv.push_str(",nodes");
    }
    if energies.is_some() {
        csv.push_str(",energy");
    }
    csv.push('\n');
    for (k, e) in spectrum.eigenvalues.iter().enumerate() {
        csv.push_str(&format!("{k},{}", num(*e)));
        if let Some(n) = &nodes {
            csv.push_str(&format!(",{}", n[k]));
        }
        if let Some(en) = &energies {
            csv.push_str(&format!(",{}", num(en[k])));
        }
        csv.push('\n');
    }
    let params = json!({
        "potential": tag,
        "mu": a.mu,
        "eps2": a.eps2.to_string(),
        "beta": a.beta,
        "lo": lo,
        "hi": hi,
        "N": a.n,
        "bc": if bc == Bc::Dirichlet { "dirichlet" } else { "periodic" },
        "k": a.k,
        "richardson": a.richardson,
        "nodes": a.nodes,
    });
    let result = SpectrumResult {
        spectrum,
        unrefined,
        nodes,
        energies,
    };
    Ok(Artifact::new(params, &result, csv))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ResidualResult {
    pub state: QesState,
    pub energy: f64,
    pub report: ResidualReport,
}

pub fn residual(a: &ResidualArgs) -> Result<Artifact, CliError> {
    let tol = Tolerances::default();
    let kp = kink_params(a.mu, &a.eps2)?;
    let line = kink_qes_states(&a.eps2, 10)?
        .into_iter()
        .find(|st| st.s == a.s)
        .ok_or_else(|| CliError::new("NO_QES_STATE", format!("no closed-form state with s = {} at eps2 = {}", a.s, a.eps2)))?;
    let state: QesState = match a.system {
        SystemArg::Line => line,
        SystemArg::Periodic => line.periodic_partner(),
    };
    let wf = reconstruct_wavefunction(&state, &kp)?;
    let energy = a.energy.unwrap_or_else(|| state.energy(a.mu));
    let (grid, v): (Grid, Box<dyn Fn(f64) -> f64>) = match state.system {
        System::Line => {
            let l = a.l.unwrap_or(25.0);
            (Grid::new(-l, l, a.n, Boundary::Dirichlet)?, Box::new(|x| kink_potential(x, &kp)))
        }
        System::Periodic => (
            Grid::new(0.0, a.l.unwrap_or(4.0 * PI / a.mu), a.n, Boundary::Periodic)?,
            Box::new(|x| periodic_potential(x, &kp)),
        ),
    };
    let report = pointwise_residual(&|x| wf.eval(x), energy, &v, &grid, &tol)?;
    let csv = format!(
        "system,s,energy,max_rel,max_abs_psi,worst_x\n{},{},{},{},{},{}\n",
        if state.system == System::Line { "line" } else { "periodic" },
        state.s,
        num(energy),
        num(report.max_rel),
        num(report.max_abs_psi),
        num(report.worst_x)
    );
    let params = json!({
        "system": if state.system == System::Line { "line" } else { "periodic" },
        "s": a.s.to_string(),
        "eps2": a.eps2.to_string(),
        "mu": a.mu,
        "lo": grid.lo,
        "hi": grid.hi,
        "N": a.n,
        "energy": energy,
    });
    Ok(Artifact::new(params, &ResidualResult { state, energy, report }, csv))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AntiisoRow {
    pub eps2: Rat,
    pub max_abs_re: f64,
    pub max_abs_im: f64,
    pub asymptotic_points: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AntiisoResult {
    pub rows: Vec<AntiisoRow>,
    pub max_abs_re: f64,
    pub max_abs_im: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// `max |V_periodic(θ) + V_kink(iθ)|` over an equispaced θ grid.
pub fn antiiso(a: &AntiisoArgs) -> Result<Artifact, CliError> {
    if a.points < 2 {
        return Err(CliError::usage("--points must be at least 2"));
    }
    let lo = a.lo.unwrap_or(-2.0 * PI / a.mu);
    let hi = a.hi.unwrap_or(2.0 * PI / a.mu);
    let mut rows = Vec::new();
    for e in &a.eps2 {
        let kp = kink_params(a.mu, e)?;
        let mut row = AntiisoRow {
            eps2: e.clone(),
            max_abs_re: 0.0,
            max_abs_im: 0.0,
            asymptotic_points: 0,
        };
        for i in 0..a.points {
            let th = lo + (hi - lo) * i as f64 / (a.points - 1) as f64;
            let v3 = kink_potential_complex(Complex64::new(0.0, th), &kp)?;
            let sum = v3.value + periodic_potential(th, &kp);
            row.max_abs_re = row.max_abs_re.max(sum.re.abs());
            row.max_abs_im = row.max_abs_im.max(sum.im.abs());
            row.asymptotic_points += v3.asymptotic as usize;
        }
        rows.push(row);
    }
    let max_abs_re = rows.iter().fold(0.0f64, |m, r| m.max(r.max_abs_re));
    let max_abs_im = rows.iter().fold(0.0f64, |m, r| m.max(r.max_abs_im));
    let tolerance = 1e-12;
    let mut csv = String::from("eps2,max_abs_re,max_abs_im\n");
    for r in &rows {
        csv.push_str(&format!("{},{},{}\n", r.eps2, num(r.max_abs_re), num(r.max_abs_im)));
    }
    let params = json!({
        "eps2": a.eps2.iter().map(Rat::to_string).collect::<Vec<_>>(),
        "mu": a.mu,
        "points": a.points,
        "lo": lo,
        "hi": hi,
    });
    let result = AntiisoResult {
        pass: max_abs_re < tolerance && max_abs_im < tolerance,
        rows,
        max_abs_re,
        max_abs_im,
        tolerance,
    };
    Ok(Artifact::new(params, &result, csv))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RadialRow {
    pub beta: f64,
    pub n_r: u32,
    pub energy: f64,
    pub expected: f64,
    pub error: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RadialResult {
    pub rows: Vec<RadialRow>,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn radial(a: &RadialArgs) -> Result<Artifact, CliError> {
    let tol = Tolerances::default();
    let mut rows = Vec::new();
    for &beta in &a.beta {
        let rp = bhaduri_radial_problem(beta, a.r_max)?;
        let g = Grid::new(0.0, rp.r_max, a.n, Boundary::Dirichlet)?;
        let v = |r: f64| rp.potential(r);
        let mut s = Spectrum::compute(&v, &g, "radial", a.levels, &tol)?;
        if !a.no_richardson {
            let fine = Spectrum::compute(&v, &g.halved(), "radial", a.levels, &tol)?;
            s = richardson_refine(&s, &fine, &tol)?;
        }
        for (n_r, &lambda) in s.eigenvalues.iter().enumerate() {
            let energy = rp.energy_from_eigenvalue(lambda);
            let expected = rp.expected_energy(n_r as u32);
            rows.push(RadialRow {
                beta,
                n_r: n_r as u32,
                energy,
                expected,
                error: (energy - expected).abs(),
            });
        }
    }
    let tolerance = 1e-3;
    let mut csv = String::from("beta,n_r,energy,expected,error\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            num(r.beta),
            r.n_r,
            num(r.energy),
            num(r.expected),
            num(r.error)
        ));
    }
    let params = json!({
        "beta": a.beta,
        "r_max": a.r_max,
        "N": a.n,
        "levels": a.levels,
        "richardson": !a.no_richardson,
    });
    let result = RadialResult {
        pass: rows.iter().all(|r| r.error < tolerance),
        rows,
        tolerance,
    };
    Ok(Artifact::new(params, &result, csv))
}
