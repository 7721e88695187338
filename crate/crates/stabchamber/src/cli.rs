//! Command implementations behind the binary: configuration ingestion,
//! dispatch, and report emission.
//!
//! Exit-code contract: 0 success, 1 domain failure (valid request, invalid
//! mathematics), 2 I/O or parse failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::chambers::{
    chamber_graph, locate, mmp_path, slice, Cell, PathVertex, SliceMap, Wall, WallId,
};
use crate::configuration::BlowUpConfig;
use crate::contractions::{all_contractions, generators, ContractionSet};
use crate::document::{builtin_fixture_name, ConfigDocument};
use crate::error::{EngineError, Result};
use crate::lattice::{ChernCharacter, NSClass};
use crate::rat::{self, Rat};
use crate::report::{fnv1a64, Report, ENGINE_VERSION};
use crate::stability::{
    moduli_of_point, point_class_walls, support_quantities, surface_descriptor, ModuliVerdict,
    SurfaceDescriptor, WallTrace,
};
use crate::svg;

pub struct Ctx {
    pub seed: Option<u64>,
    pub eps: Rat,
    pub timing: bool,
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx {
            seed: None,
            eps: rat::frac(1, 100),
            timing: false,
        }
    }
}

/// Output of one command: text for stdout, optional files, exit code.
pub struct CmdResult {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
    pub exit: i32,
}

impl CmdResult {
    fn json(stdout: String) -> Self {
        CmdResult {
            stdout,
            files: Vec::new(),
            exit: 0,
        }
    }
}

pub fn exit_code(e: &EngineError) -> i32 {
    match e {
        EngineError::Argument(_) => 2,
        _ => 1,
    }
}

struct Loaded {
    cfg: BlowUpConfig,
    digest: String,
    example: Option<&'static str>,
    labels: Option<BTreeMap<String, String>>,
}

fn load(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| EngineError::Argument(format!("cannot read {}: {e}", path.display())))?;
    let doc = ConfigDocument::parse(&text)?;
    let cfg = doc.to_config()?;
    let example = builtin_fixture_name(&cfg);
    Ok(Loaded {
        cfg,
        digest: fnv1a64(text.as_bytes()),
        example,
        labels: doc.labels.clone(),
    })
}

fn report<T: Serialize>(
    ctx: &Ctx,
    command: &str,
    path: &Path,
    loaded: &Loaded,
    started: Instant,
    result: T,
) -> String {
    Report {
        command: command.to_string(),
        input: Some(path.display().to_string()),
        input_digest: Some(loaded.digest.clone()),
        example: loaded.example.map(str::to_string),
        engine_version: ENGINE_VERSION,
        seed: ctx.seed,
        timing_ms: ctx.timing.then(|| started.elapsed().as_millis()),
        result,
    }
    .render()
}

fn class_strings(c: &NSClass) -> Vec<String> {
    c.coeffs().iter().map(rat::display).collect()
}

fn set_indices(s: &ContractionSet) -> Vec<usize> {
    s.iter().collect()
}

/// Parse space-separated rationals into a class of the expected length.
pub fn parse_class(words: &[String], n: usize) -> Result<NSClass> {
    let mut coeffs = Vec::new();
    for w in words {
        for piece in w.split_whitespace() {
            coeffs.push(rat::parse(piece).map_err(EngineError::Argument)?);
        }
    }
    if coeffs.len() != n + 1 {
        return Err(EngineError::Argument(format!(
            "class vector has {} entries, expected {} (H then Ĉ1..Ĉ{n})",
            coeffs.len(),
            n + 1
        )));
    }
    Ok(NSClass::new(coeffs))
}

#[derive(Serialize)]
struct ViolationPayload {
    rule: &'static str,
    indices: Vec<usize>,
    message: String,
}

#[derive(Serialize)]
struct ValidatePayload {
    n: usize,
    valid: bool,
    violations: Vec<ViolationPayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<String, String>>,
}

pub fn cmd_validate(ctx: &Ctx, path: &Path) -> Result<CmdResult> {
    let started = Instant::now();
    let loaded = load(path)?;
    let violations: Vec<ViolationPayload> = loaded
        .cfg
        .violations()
        .into_iter()
        .map(|v| ViolationPayload {
            rule: v.rule.name(),
            indices: v.indices,
            message: v.message,
        })
        .collect();
    let valid = violations.is_empty();
    let payload = ValidatePayload {
        n: loaded.cfg.n(),
        valid,
        violations,
        labels: loaded.labels.clone(),
    };
    let stdout = report(ctx, "validate", path, &loaded, started, payload);
    Ok(CmdResult {
        stdout,
        files: Vec::new(),
        exit: if valid { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct ChPayload {
    rank: i64,
    c1: Vec<String>,
    ch2: String,
}

impl ChPayload {
    fn new(ch: &ChernCharacter) -> Self {
        ChPayload {
            rank: ch.rank,
            c1: class_strings(&ch.c1),
            ch2: rat::display(&ch.ch2),
        }
    }
}

#[derive(Serialize)]
struct GeneratorPayload {
    index: usize,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<usize>,
    ch: ChPayload,
    divisor_note: String,
}

#[derive(Serialize)]
struct SurfacePayload {
    label: String,
    remaining: Vec<usize>,
    induced_on: BTreeMap<String, Vec<usize>>,
}

impl SurfacePayload {
    fn new(d: &SurfaceDescriptor) -> Self {
        SurfacePayload {
            label: d.label.clone(),
            remaining: d.remaining.clone(),
            induced_on: d
                .induced_on
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct ContractionPayload {
    s: Vec<usize>,
    target: SurfacePayload,
    generators: Vec<GeneratorPayload>,
}

#[derive(Serialize)]
struct ContractionsPayload {
    count: usize,
    contractions: Vec<ContractionPayload>,
}

pub fn cmd_contractions(ctx: &Ctx, path: &Path) -> Result<CmdResult> {
    let started = Instant::now();
    let loaded = load(path)?;
    loaded.cfg.validate()?;
    let mut contractions = Vec::new();
    for s in all_contractions(&loaded.cfg)? {
        let gens = generators(&loaded.cfg, &s)?
            .into_iter()
            .map(|g| GeneratorPayload {
                index: g.index,
                kind: g.kind.to_string(),
                kappa: g.kappa,
                ch: ChPayload::new(&g.ch),
                divisor_note: g.divisor_note,
            })
            .collect();
        contractions.push(ContractionPayload {
            s: set_indices(&s),
            target: SurfacePayload::new(&surface_descriptor(&loaded.cfg, &s)),
            generators: gens,
        });
    }
    let payload = ContractionsPayload {
        count: contractions.len(),
        contractions,
    };
    Ok(CmdResult::json(report(
        ctx,
        "contractions",
        path,
        &loaded,
        started,
        payload,
    )))
}

#[derive(Serialize)]
struct WallIdPayload {
    lower: Vec<usize>,
    upper: Vec<usize>,
    pivot: usize,
}

impl WallIdPayload {
    fn new(w: &WallId) -> Self {
        WallIdPayload {
            lower: set_indices(&w.lower),
            upper: set_indices(&w.upper),
            pivot: w.pivot,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ModuliPayload {
    Surface {
        s: Vec<usize>,
        surface: SurfacePayload,
    },
    Wall {
        walls: Vec<WallIdPayload>,
    },
    Outside,
    Overlap {
        chambers: Vec<Vec<usize>>,
    },
}

impl ModuliPayload {
    fn new(v: &ModuliVerdict) -> Self {
        match v {
            ModuliVerdict::Surface { s, descriptor } => ModuliPayload::Surface {
                s: set_indices(s),
                surface: SurfacePayload::new(descriptor),
            },
            ModuliVerdict::Wall { walls } => ModuliPayload::Wall {
                walls: walls.iter().map(WallIdPayload::new).collect(),
            },
            ModuliVerdict::Outside => ModuliPayload::Outside,
            ModuliVerdict::Overlap { chambers } => ModuliPayload::Overlap {
                chambers: chambers.iter().map(set_indices).collect(),
            },
        }
    }
}

#[derive(Serialize)]
struct LocatePayload {
    class: Vec<String>,
    chambers: Vec<Vec<usize>>,
    walls: Vec<WallIdPayload>,
    outside: bool,
    moduli: ModuliPayload,
}

pub fn cmd_locate(ctx: &Ctx, path: &Path, class: &[String]) -> Result<CmdResult> {
    let started = Instant::now();
    let loaded = load(path)?;
    loaded.cfg.validate()?;
    let alpha = parse_class(class, loaded.cfg.n())?;
    let (loc, verdict) = moduli_of_point(&loaded.cfg, &alpha)?;
    let payload = LocatePayload {
        class: class_strings(&alpha),
        chambers: loc.chambers.iter().map(set_indices).collect(),
        walls: loc.walls.iter().map(WallIdPayload::new).collect(),
        outside: loc.outside,
        moduli: ModuliPayload::new(&verdict),
    };
    Ok(CmdResult::json(report(
        ctx, "locate", path, &loaded, started, payload,
    )))
}

#[derive(Serialize)]
struct EdgePayload {
    lower: Vec<usize>,
    upper: Vec<usize>,
    pivot: usize,
    witness: Vec<String>,
    upper_witness: Vec<String>,
    lower_witness: Vec<String>,
    eps: String,
}

impl EdgePayload {
    fn new(w: &Wall) -> Self {
        EdgePayload {
            lower: set_indices(&w.lower),
            upper: set_indices(&w.upper),
            pivot: w.pivot,
            witness: class_strings(&w.witness),
            upper_witness: class_strings(&w.upper_witness),
            lower_witness: class_strings(&w.lower_witness),
            eps: rat::display(&w.eps),
        }
    }
}

#[derive(Serialize)]
struct GraphPayload {
    nodes: Vec<Vec<usize>>,
    edges: Vec<EdgePayload>,
}

pub fn cmd_graph(ctx: &Ctx, path: &Path, format: &str) -> Result<CmdResult> {
    let started = Instant::now();
    let loaded = load(path)?;
    loaded.cfg.validate()?;
    let graph = chamber_graph(&loaded.cfg, &ctx.eps)?;
    match format {
        "json" => {
            let payload = GraphPayload {
                nodes: graph.nodes.iter().map(set_indices).collect(),
                edges: graph.edges.iter().map(EdgePayload::new).collect(),
            };
            Ok(CmdResult::json(report(
                ctx, "graph", path, &loaded, started, payload,
            )))
        }
        "dot" => {
            let mut out = String::from("graph chambers {\n");
            for s in &graph.nodes {
                let surface = surface_descriptor(&loaded.cfg, s);
                out.push_str(&format!("  \"{s}\" [label=\"{s} : {}\"];\n", surface.label));
            }
            for e in &graph.edges {
                out.push_str(&format!(
                    "  \"{}\" -- \"{}\" [label=\"pivot {}\"];\n",
                    e.lower, e.upper, e.pivot
                ));
            }
            out.push_str("}\n");
            Ok(CmdResult::json(out))
        }
        other => Err(EngineError::Argument(format!(
            "unknown graph format {other:?}; use json or dot"
        ))),
    }
}

#[derive(Serialize)]
struct LegendEntry {
    index: usize,
    s: Vec<usize>,
    surface: SurfacePayload,
    color: String,
}

#[derive(Serialize)]
struct TracePayload {
    class: Vec<String>,
    line: [String; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    segment: Option<[[String; 2]; 2]>,
}

impl TracePayload {
    fn new(t: &WallTrace) -> Self {
        TracePayload {
            class: class_strings(&t.class),
            line: [
                rat::display(&t.line.0),
                rat::display(&t.line.1),
                rat::display(&t.line.2),
            ],
            segment: t.segment.as_ref().map(|[p, q]| {
                [
                    [rat::display(&p.0), rat::display(&p.1)],
                    [rat::display(&q.0), rat::display(&q.1)],
                ]
            }),
        }
    }
}

#[derive(Serialize)]
struct SlicePayload {
    origin: Vec<String>,
    u: Vec<String>,
    v: Vec<String>,
    grid: usize,
    window: String,
    /// Cell codes row by row, top row first: chamber legend index, or -1
    /// wall, -2 outside, -3 overlap.
    rows: Vec<Vec<i64>>,
    legend: Vec<LegendEntry>,
    traces: Vec<TracePayload>,
    #[serde(skip_serializing_if = "Option::is_none")]
    svg_file: Option<String>,
}

fn cell_code(c: &Cell) -> i64 {
    match c {
        Cell::Chamber(i) => *i as i64,
        Cell::Wall => -1,
        Cell::Outside => -2,
        Cell::Overlap => -3,
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_slice(
    ctx: &Ctx,
    path: &Path,
    origin: &str,
    u: &str,
    v: &str,
    grid: usize,
    window: &str,
    svg_out: Option<&Path>,
) -> Result<CmdResult> {
    let started = Instant::now();
    let loaded = load(path)?;
    loaded.cfg.validate()?;
    let n = loaded.cfg.n();
    let origin = parse_class(&[origin.to_string()], n)?;
    let u = parse_class(&[u.to_string()], n)?;
    let v = parse_class(&[v.to_string()], n)?;
    let window = rat::parse(window).map_err(EngineError::Argument)?;
    let map: SliceMap = slice(&loaded.cfg, &origin, &u, &v, grid, &window)?;
    let traces = point_class_walls(&loaded.cfg, &origin, &u, &v, &window)?;
    let legend_surfaces: Vec<SurfaceDescriptor> = map
        .legend
        .iter()
        .map(|s| surface_descriptor(&loaded.cfg, s))
        .collect();
    let mut files = Vec::new();
    let svg_file = if let Some(out) = svg_out {
        files.push((
            out.to_path_buf(),
            svg::render_slice(&map, &traces, &legend_surfaces),
        ));
        Some(out.display().to_string())
    } else {
        None
    };
    let payload = SlicePayload {
        origin: class_strings(&origin),
        u: class_strings(&u),
        v: class_strings(&v),
        grid,
        window: rat::display(&window),
        rows: map
            .cells
            .iter()
            .map(|row| row.iter().map(cell_code).collect())
            .collect(),
        legend: map
            .legend
            .iter()
            .zip(&legend_surfaces)
            .enumerate()
            .map(|(i, (s, surface))| LegendEntry {
                index: i,
                s: set_indices(s),
                surface: SurfacePayload::new(surface),
                color: svg::chamber_color(i).to_string(),
            })
            .collect(),
        traces: traces.iter().map(TracePayload::new).collect(),
        svg_file,
    };
    let stdout = report(ctx, "slice", path, &loaded, started, payload);
    Ok(CmdResult {
        stdout,
        files,
        exit: 0,
    })
}

#[derive(Serialize)]
struct MSupPayload {
    value: String,
    attained: bool,
}

#[derive(Serialize)]
struct SupportPayload {
    s: Vec<usize>,
    class: Vec<String>,
    omega: Vec<String>,
    d_part: Vec<String>,
    c_omega: Option<String>,
    l_sup: String,
    m_sup: MSupPayload,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_theta: Option<f64>,
}

pub fn cmd_support(ctx: &Ctx, path: &Path, s_text: &str, class: &[String]) -> Result<CmdResult> {
    let started = Instant::now();
    let loaded = load(path)?;
    loaded.cfg.validate()?;
    let s = ContractionSet::parse(s_text)?;
    let alpha = parse_class(class, loaded.cfg.n())?;
    if !crate::chambers::closure_contains(&loaded.cfg, &s, &alpha)? {
        return Err(EngineError::Domain(format!(
            "class {alpha} is outside the closure of the chamber of {s}"
        )));
    }
    let rep = support_quantities(&loaded.cfg, &s, &alpha)?;
    let payload = SupportPayload {
        s: set_indices(&rep.s),
        class: class_strings(&alpha),
        omega: class_strings(&rep.omega),
        d_part: class_strings(&rep.d_part),
        c_omega: rep.c_omega.as_ref().map(rat::display),
        l_sup: rat::display(&rep.l_sup),
        m_sup: MSupPayload {
            value: rat::display(&rep.m_sup),
            attained: rep.m_sup_attained,
        },
        theta: rep.theta.map(|(a, b)| [a, b]),
        k_theta: rep.k_theta,
    };
    Ok(CmdResult::json(report(
        ctx, "support", path, &loaded, started, payload,
    )))
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum PathVertexPayload {
    Chamber {
        s: Vec<usize>,
        point: Vec<String>,
    },
    Wall {
        wall: WallIdPayload,
        point: Vec<String>,
    },
}

#[derive(Serialize)]
struct PathPayload {
    eps: String,
    chain: Vec<Vec<usize>>,
    vertices: Vec<PathVertexPayload>,
}

pub fn cmd_mmp_path(ctx: &Ctx, path: &Path) -> Result<CmdResult> {
    let started = Instant::now();
    let loaded = load(path)?;
    loaded.cfg.validate()?;
    let vertices = mmp_path(&loaded.cfg, &ctx.eps)?;
    let chain: Vec<Vec<usize>> = (0..=loaded.cfg.n()).map(|k| (1..=k).collect()).collect();
    let payload = PathPayload {
        eps: rat::display(&ctx.eps),
        chain,
        vertices: vertices
            .iter()
            .map(|v| match v {
                PathVertex::Chamber { s, point } => PathVertexPayload::Chamber {
                    s: set_indices(s),
                    point: class_strings(point),
                },
                PathVertex::Wall { id, point } => PathVertexPayload::Wall {
                    wall: WallIdPayload::new(id),
                    point: class_strings(point),
                },
            })
            .collect(),
    };
    Ok(CmdResult::json(report(
        ctx, "mmp-path", path, &loaded, started, payload,
    )))
}

/// Sanity cross-check used by tests: the locate verdict at a sampled slice
/// point must match the emitted cell code.
pub fn recheck_slice_cell(
    cfg: &BlowUpConfig,
    map: &SliceMap,
    row: usize,
    col: usize,
) -> Result<bool> {
    let a = &map.axis[col];
    let b = &map.axis[map.grid - 1 - row];
    let alpha = &(&map.origin + &map.u.scale(a)) + &map.v.scale(b);
    let loc = locate(cfg, &alpha)?;
    let expected = match loc.chambers.len() {
        0 if !loc.walls.is_empty() => Cell::Wall,
        0 => Cell::Outside,
        1 => {
            let idx = map
                .legend
                .iter()
                .position(|s| s == &loc.chambers[0])
                .expect("legend covers chambers");
            Cell::Chamber(idx)
        }
        _ => Cell::Overlap,
    };
    Ok(map.cells[row][col] == expected)
}
