//! Report rendering for every subcommand. All output is deterministic:
//! component, tree and generator orders are the canonical library orders,
//! and polynomials print in canonical form.

use quiver_chow::covering::FixedComponent;
use quiver_chow::input::Instance;
use quiver_chow::localization::{generator_labels, generator_tuple, GeneratorLabel};
use quiver_chow::poly::{Character, Poly, Symbols};
use quiver_chow::presentation::{
    ambient_dims, kernel_generators, kernel_span_slice, StabilityMode,
};
use quiver_chow::quiver::Quiver;
use quiver_chow::toric::{
    gkm_membership, image_basis, stable_almost_trees, stable_spanning_trees,
    thin_kernel_generators, ThinMode, ToricTuple,
};

use crate::{CliError, Format};

pub fn character_string(chi: &Character, sym: &Symbols) -> String {
    chi.combo_string(&sym.arrows)
}

fn beta_string(c: &FixedComponent, q: &Quiver, sym: &Symbols) -> String {
    c.beta
        .entries
        .iter()
        .map(|(cv, &m)| {
            let base = format!(
                "({},{})",
                q.vertex_name(cv.vertex),
                character_string(&cv.chi, sym)
            );
            if m == 1 {
                base
            } else {
                format!("{base}^{m}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn fixed_points_report(inst: &Instance, format: Format) -> Result<String, CliError> {
    let components = quiver_chow::covering::fixed_components(&inst.quiver, &inst.d, &inst.theta)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let sym = Symbols::from_quiver(&inst.quiver);
    let isolated = components.iter().filter(|c| c.isolated).count();
    let mut out = String::new();
    match format {
        Format::Text => {
            out.push_str(&format!(
                "fixed components: {} (isolated: {isolated})\n",
                components.len()
            ));
            for (idx, c) in components.iter().enumerate() {
                out.push_str(&format!(
                    "component {idx}: dim={} isolated={} beta= {}\n",
                    c.dimension,
                    c.isolated,
                    beta_string(c, &inst.quiver, &sym)
                ));
            }
        }
        Format::Machine => {
            for (idx, c) in components.iter().enumerate() {
                out.push_str(&format!(
                    "component\t{idx}\tdim={}\tisolated={}\tbeta={}\n",
                    c.dimension,
                    c.isolated,
                    beta_string(c, &inst.quiver, &sym)
                ));
            }
        }
        Format::Latex => return Err(CliError::Domain("no latex form for fixed-points".into())),
    }
    Ok(out)
}

pub fn label_string(label: &GeneratorLabel, q: &Quiver) -> String {
    match label {
        GeneratorLabel::ArrowClass(a) => format!("x_{}", q.arrow(*a).id),
        GeneratorLabel::Z { i, j, k, l } => {
            format!("z{{{},{};{k},{l}}}", q.vertex_name(*i), q.vertex_name(*j))
        }
    }
}

fn poly_latex(p: &Poly, sym: &Symbols) -> String {
    // the canonical string is already close to TeX; spell variables as
    // subscripted symbols and drop the explicit multiplication dots
    let rendered = sym.poly_string(p);
    let mut out = String::new();
    let mut chars = rendered.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '*' => {}
            'x' => {
                let mut token = String::from("x");
                while let Some(&n) = chars.peek() {
                    if n.is_alphanumeric()
                        || n == '_'
                        || n == '@'
                        || n == '#'
                        || n == ','
                        || n == '-'
                    {
                        token.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if let Some(rest) = token.strip_prefix("xi_") {
                    out.push_str(&format!("\\xi_{{{}}}", rest.replace(['@', '#'], ",")));
                } else if let Some(rest) = token.strip_prefix("x_") {
                    out.push_str(&format!("x_{{{rest}}}"));
                } else {
                    out.push_str(&token);
                }
            }
            other => out.push(other),
        }
    }
    out
}

/// Evaluates the generator tuples, splitting component work across the
/// requested number of threads; output order never depends on the split.
fn tuples_parallel(
    inst: &Instance,
    components: &[FixedComponent],
    labels: &[GeneratorLabel],
    threads: usize,
) -> Result<Vec<Vec<Poly>>, CliError> {
    let compute = |label: &GeneratorLabel| {
        generator_tuple(&inst.d, components, label).map_err(|e| CliError::Domain(e.to_string()))
    };
    if threads <= 1 || labels.len() <= 1 {
        return labels.iter().map(compute).collect();
    }
    let chunk = labels.len().div_ceil(threads);
    let results: Vec<Result<Vec<Vec<Poly>>, CliError>> = std::thread::scope(|scope| {
        labels
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(compute).collect()))
            .collect::<Vec<_>>()
            .into_iter()
            .map(|h| h.join().expect("worker thread"))
            .collect()
    });
    let mut out = Vec::with_capacity(labels.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

pub fn localize_report(
    inst: &Instance,
    format: Format,
    threads: usize,
) -> Result<String, CliError> {
    let components = quiver_chow::covering::fixed_components(&inst.quiver, &inst.d, &inst.theta)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let sym = Symbols::from_quiver(&inst.quiver);
    let labels = generator_labels(&inst.quiver, &inst.d);
    let tuples = tuples_parallel(inst, &components, &labels, threads)?;
    let mut out = String::new();
    match format {
        Format::Text => {
            out.push_str(&format!("components: {}\n", components.len()));
            for (label, tuple) in labels.iter().zip(&tuples) {
                let entries: Vec<String> = tuple.iter().map(|p| sym.poly_string(p)).collect();
                out.push_str(&format!(
                    "generator {} = [ {} ]\n",
                    label_string(label, &inst.quiver),
                    entries.join(" ; ")
                ));
            }
        }
        Format::Machine => {
            for (label, tuple) in labels.iter().zip(&tuples) {
                let entries: Vec<String> = tuple.iter().map(|p| sym.poly_string(p)).collect();
                out.push_str(&format!(
                    "generator\t{}\t{}\n",
                    label_string(label, &inst.quiver),
                    entries.join("\t")
                ));
            }
        }
        Format::Latex => {
            for (label, tuple) in labels.iter().zip(&tuples) {
                out.push_str(&format!(
                    "% generator {}\n",
                    label_string(label, &inst.quiver)
                ));
                out.push_str("\\begin{pmatrix}\n");
                let entries: Vec<String> = tuple.iter().map(|p| poly_latex(p, &sym)).collect();
                out.push_str(&entries.join(" \\\\\n"));
                out.push_str("\n\\end{pmatrix}\n");
            }
        }
    }
    Ok(out)
}

pub fn present_report(
    inst: &Instance,
    mode: StabilityMode,
    max_degree: u32,
    format: Format,
) -> Result<String, CliError> {
    let set = kernel_generators(&inst.quiver, &inst.d, &inst.theta, mode, max_degree)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let sym = Symbols::from_quiver(&inst.quiver);
    let mode_name = match mode {
        StabilityMode::Semistable => "semistable",
        StabilityMode::Stable => "stable",
    };
    let mut out = String::new();
    let dim_of = |v: &[u32]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    match format {
        Format::Text => {
            out.push_str(&format!(
                "mode: {mode_name}, max degree: {max_degree}, generators: {}\n",
                set.generators.len()
            ));
            for g in &set.generators {
                out.push_str(&format!(
                    "d'=({}) d''=({}) f={} g={} -> {}{}\n",
                    dim_of(&g.decomposition.d_prime.0),
                    dim_of(&g.decomposition.d_double_prime.0),
                    g.f_monomial.label(&sym),
                    g.g_monomial.label(&sym),
                    sym.poly_string(&g.product),
                    if g.is_zero { " (zero)" } else { "" }
                ));
            }
            let ambient = ambient_dims(&inst.quiver, &inst.d, max_degree);
            out.push_str("graded dimensions (degree: ambient / kernel / quotient):\n");
            for deg in 0..=max_degree {
                let slice = kernel_span_slice(&inst.quiver, &set, deg);
                let rank = quiver_chow::linalg::span_dim(&slice) as u64;
                out.push_str(&format!(
                    "  {deg}: {} / {rank} / {}\n",
                    ambient[deg as usize],
                    ambient[deg as usize] - rank
                ));
            }
        }
        Format::Machine => {
            for g in &set.generators {
                out.push_str(&format!(
                    "kernel-generator\t({})\t({})\t{}\t{}\t{}\n",
                    dim_of(&g.decomposition.d_prime.0),
                    dim_of(&g.decomposition.d_double_prime.0),
                    g.f_monomial.label(&sym),
                    g.g_monomial.label(&sym),
                    sym.poly_string(&g.product),
                ));
            }
            let ambient = ambient_dims(&inst.quiver, &inst.d, max_degree);
            for deg in 0..=max_degree {
                let slice = kernel_span_slice(&inst.quiver, &set, deg);
                let rank = quiver_chow::linalg::span_dim(&slice) as u64;
                out.push_str(&format!(
                    "graded-dimension\t{deg}\t{}\t{rank}\t{}\n",
                    ambient[deg as usize],
                    ambient[deg as usize] - rank
                ));
            }
        }
        Format::Latex => return Err(CliError::Domain("no latex form for present".into())),
    }
    Ok(out)
}

fn require_thin(inst: &Instance) -> Result<(), CliError> {
    if !inst.d.0.iter().all(|&x| x == 1) {
        return Err(CliError::Domain(
            "toric commands require the thin dimension vector (all entries 1)".into(),
        ));
    }
    Ok(())
}

fn tree_string(tree: &[usize], q: &Quiver) -> String {
    let names: Vec<String> = tree.iter().map(|&a| q.arrow(a).id.clone()).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn trees_report(inst: &Instance) -> Result<String, CliError> {
    require_thin(inst)?;
    let trees = stable_spanning_trees(&inst.quiver, &inst.theta)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let mut out = format!("stable spanning trees: {}\n", trees.len());
    for (idx, tree) in trees.iter().enumerate() {
        out.push_str(&format!(
            "tree {idx}: {}\n",
            tree_string(tree, &inst.quiver)
        ));
    }
    Ok(out)
}

pub fn edges_report(inst: &Instance, dot: bool) -> Result<String, CliError> {
    require_thin(inst)?;
    let trees = stable_spanning_trees(&inst.quiver, &inst.theta)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let edges = stable_almost_trees(&inst.quiver, &inst.theta)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let tree_index = |t: &Vec<usize>| trees.iter().position(|u| u == t).expect("stable tree");
    let mut out = String::new();
    if dot {
        out.push_str("graph gkm {\n");
        for (idx, tree) in trees.iter().enumerate() {
            out.push_str(&format!(
                "  t{idx} [label=\"{}\"];\n",
                tree_string(tree, &inst.quiver)
            ));
        }
        for e in &edges {
            out.push_str(&format!(
                "  t{} -- t{} [label=\"{}/{}\"];\n",
                tree_index(&e.omega_0),
                tree_index(&e.omega_inf),
                inst.quiver.arrow(e.alpha_0).id,
                inst.quiver.arrow(e.alpha_inf).id,
            ));
        }
        out.push_str("}\n");
    } else {
        out.push_str(&format!("stable almost trees: {}\n", edges.len()));
        for (idx, e) in edges.iter().enumerate() {
            out.push_str(&format!(
                "edge {idx}: omega={} alpha0={} alphaInf={} trees: {} -- {}\n",
                tree_string(&e.omega, &inst.quiver),
                inst.quiver.arrow(e.alpha_0).id,
                inst.quiver.arrow(e.alpha_inf).id,
                tree_index(&e.omega_0),
                tree_index(&e.omega_inf),
            ));
        }
    }
    Ok(out)
}

pub fn basis_report(inst: &Instance, max_degree: u32) -> Result<String, CliError> {
    require_thin(inst)?;
    let sym = Symbols::from_quiver(&inst.quiver);
    let gens = thin_kernel_generators(&inst.quiver, &inst.theta, ThinMode::Stable)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let mut out = format!("thin kernel generators: {}\n", gens.len());
    for p in &gens {
        out.push_str(&format!("  {}\n", sym.poly_string(p)));
    }
    let basis = image_basis(&inst.quiver, &inst.theta, ThinMode::Stable, max_degree)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let trees = stable_spanning_trees(&inst.quiver, &inst.theta)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    out.push_str(&format!(
        "image basis up to degree {max_degree} over {} trees: {} elements\n",
        trees.len(),
        basis.len()
    ));
    for (m, tuple) in &basis {
        let mono = sym.monomial_string(m);
        let entries: Vec<String> = tuple.entries.iter().map(|p| sym.poly_string(p)).collect();
        out.push_str(&format!("i*({mono}) = [ {} ]\n", entries.join(" ; ")));
    }
    Ok(out)
}

pub fn check_report(inst: &Instance, tuple_text: &str) -> Result<(String, bool), CliError> {
    require_thin(inst)?;
    let trees = stable_spanning_trees(&inst.quiver, &inst.theta)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let edges = stable_almost_trees(&inst.quiver, &inst.theta)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let sym = Symbols::from_quiver(&inst.quiver);
    let mut entries = vec![None; trees.len()];
    for (line_no, raw) in tuple_text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (idx, poly) = line.split_once(':').ok_or_else(|| {
            CliError::Parse(format!(
                "tuple line {}: expected `tree: polynomial`",
                line_no + 1
            ))
        })?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("tuple line {}: bad tree index", line_no + 1)))?;
        if idx >= trees.len() {
            return Err(CliError::Parse(format!(
                "tuple line {}: tree index {idx} out of range",
                line_no + 1
            )));
        }
        let p = sym
            .parse_poly(poly.trim())
            .map_err(|e| CliError::Parse(format!("tuple line {}: {e}", line_no + 1)))?;
        entries[idx] = Some(p);
    }
    let entries: Vec<Poly> = entries
        .into_iter()
        .map(|e| e.unwrap_or_else(Poly::zero))
        .collect();
    let tuple = ToricTuple { entries };
    let (ok, violations) =
        gkm_membership(&trees, &tuple, &edges).map_err(|e| CliError::Domain(e.to_string()))?;
    let mut out = String::new();
    if ok {
        out.push_str("GKM membership: PASS\n");
    } else {
        out.push_str(&format!(
            "GKM membership: FAIL ({} violations)\n",
            violations.len()
        ));
        for v in &violations {
            out.push_str(&format!(
                "violation at edge omega={}: difference {}\n",
                tree_string(&v.edge.omega, &inst.quiver),
                sym.poly_string(&v.difference)
            ));
        }
    }
    Ok((out, ok))
}
