mod dsl;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use marked_groups::detect::{self, Property, UniversalSentence, Verdict};
use marked_groups::gog;
use marked_groups::homo::{self, Hom};
use marked_groups::metric::{self, Agreement};
use marked_groups::mr::{self, Factorization};
use marked_groups::oracle::{GraphOfGroupsSpec, VertexGroup};
use marked_groups::sl2::SL2Rep;
use marked_groups::surface::{self, SurfaceSpec};
use marked_groups::{Alphabet, Error, MarkedGroup, Word};

use dsl::{inline_group, SpecFile};

#[derive(Parser)]
#[command(
    name = "mgroups",
    version,
    about = "Computations in the space of marked groups"
)]
struct Cli {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Emit graphviz DOT where the command has a graph to show.
    #[arg(long, global = true)]
    dot: bool,
    /// Worker thread cap.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct GroupArg {
    /// Inline group (`free 2`, `abelian 1 mod 5`, ...) or a `.gg` file.
    #[arg(long)]
    group: String,
    /// Definition to use from a `.gg` file (default: the last group).
    #[arg(long)]
    name: Option<String>,
    /// A `.gg` file whose definitions inline groups may refer to.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SurfaceArgs {
    #[arg(long, conflicts_with = "non_orientable")]
    orientable: bool,
    #[arg(long)]
    non_orientable: bool,
    /// Number of handles.
    #[arg(short = 'g', long)]
    genus: Option<usize>,
    /// Number of cross-caps.
    #[arg(short = 'k', long)]
    crosscaps: Option<usize>,
    /// Euler characteristic of a non-orientable surface.
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<i64>,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Expect {
    /// A witness (violation, failure) is expected.
    Witness,
    /// No witness is expected.
    None,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Family {
    /// `(Z/i, (1))` converging to `(Z, (1))`.
    Cyclic,
    /// `(Z, (1, i))` converging to `(Z^2, std)`.
    Integers,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cayley ball of radius R.
    Ball {
        #[command(flatten)]
        g: GroupArg,
        #[arg(short = 'R', long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
    /// Agreement radius of two marked groups.
    Dist {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = metric::DEFAULT_RMAX)]
        rmax: usize,
    },
    /// Agreement radii along a built-in sequence.
    Converge {
        #[arg(long, value_enum)]
        family: Family,
        /// `lo..hi` (inclusive) or a comma-separated list.
        #[arg(long)]
        indices: String,
        #[arg(long, default_value_t = metric::DEFAULT_RMAX)]
        rmax: usize,
    },
    /// Search the ball for a witness against a property.
    Detect {
        #[command(flatten)]
        g: GroupArg,
        /// abelian, nilpotent(k), torsion(E), ct, csa, rank(k[,len]).
        #[arg(long)]
        prop: String,
        #[arg(short = 'R', long, default_value_t = 3)]
        radius: usize,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// First Betti number of the known presentation.
    Betti {
        #[command(flatten)]
        g: GroupArg,
    },
    /// Search tuples from the ball falsifying a universal sentence.
    Falsify {
        #[command(flatten)]
        g: GroupArg,
        /// Sentence text or the name of a `sentence` in the spec file.
        #[arg(long)]
        sentence: String,
        #[arg(short = 'R', long, default_value_t = 2)]
        radius: usize,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Build a group and describe it.
    Construct {
        #[command(flatten)]
        g: GroupArg,
    },
    /// Dehn twist along an edge-group element.
    Twist {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        along: String,
        #[arg(short = 'k', long, default_value_t = 1, allow_hyphen_values = true)]
        power: i64,
    },
    /// Check a Baumslag window in a free group.
    Baumslag {
        /// One of the words a_i (repeatable).
        #[arg(long = "a", required = true)]
        a: Vec<String>,
        #[arg(long)]
        c: String,
        #[arg(short = 'K', default_value_t = 0)]
        k: u32,
        #[arg(short = 'W', default_value_t = 4)]
        w: u32,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Discriminating homomorphisms to a free (or free abelian) group.
    Discriminate {
        #[command(flatten)]
        g: GroupArg,
        /// Exponents for the retraction of a centralizer extension.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        ks: Vec<i64>,
        /// Elements to keep nontrivial and distinct (repeatable).
        #[arg(long)]
        witness: Vec<String>,
        #[arg(long, default_value = "free 2")]
        target: String,
        #[arg(short = 'L', default_value_t = 2)]
        l: usize,
        #[arg(short = 'R', long, default_value_t = 3)]
        radius: usize,
    },
    /// Certify a homomorphism with a congruence representation in SL2(Z).
    Sl2 {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        hom: String,
        /// Matrix `a,b,c,d` per target generator (repeatable); defaults to Sanov's pair.
        #[arg(long, allow_hyphen_values = true)]
        matrix: Vec<String>,
        #[arg(short = 'p', default_value_t = 2)]
        p: u64,
        #[arg(long)]
        witness: Vec<String>,
    },
    /// Surface group data.
    Surface {
        #[command(flatten)]
        s: SurfaceArgs,
    },
    /// Maximal pinchings of a surface group.
    Pinch {
        #[command(flatten)]
        s: SurfaceArgs,
    },
    /// Scan the ball of F2 for non-commuting solutions of a^2 b^2 c^2 = 1.
    Lyndon {
        #[arg(short = 'L', default_value_t = 3)]
        l: usize,
    },
    /// Makanin-Razborov diagram of an abelian or surface group.
    Mr {
        #[arg(long)]
        group: Option<String>,
        #[command(flatten)]
        s: SurfaceArgs,
    },
    /// Factor a homomorphism through the diagram of its source.
    Factor {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        hom: String,
        #[command(flatten)]
        s: SurfaceArgs,
        /// Also precompose with sampled automorphisms up to this depth.
        #[arg(long)]
        modular: Option<usize>,
    },
    /// Cylinder graph of a graph of groups.
    Cyl {
        #[command(flatten)]
        g: GroupArg,
    },
    /// CSA criterion for a graph of groups.
    Csa {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Pull centralizers across an edge.
    Pull {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, conflicts_with = "all")]
        edge: Option<usize>,
        /// Pull from the terminal vertex toward the origin.
        #[arg(long)]
        reverse: bool,
        #[arg(long)]
        all: bool,
    },
}

/// One command's output in every format, and whether it is a negative answer.
struct Report {
    text: String,
    json: Value,
    dot: Option<String>,
    negative: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Report {
        Report {
            text,
            json,
            dot: None,
            negative: false,
        }
    }
}

type Res<T> = Result<T, Error>;

fn load_spec(path: &Path) -> Res<SpecFile> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    SpecFile::parse(&text)
}

fn env_of(spec: &Option<PathBuf>) -> Res<SpecFile> {
    match spec {
        Some(p) => load_spec(p),
        None => Ok(SpecFile::default()),
    }
}

fn resolve(text: &str, name: Option<&str>, spec: &Option<PathBuf>) -> Res<MarkedGroup> {
    let path = Path::new(text);
    if path.is_file() {
        let f = load_spec(path)?;
        let name = match name {
            Some(n) => n.to_string(),
            None => f
                .last_group()
                .ok_or_else(|| Error::Invalid(format!("{text} defines no group")))?
                .to_string(),
        };
        return f.group(&name);
    }
    let env = env_of(spec)?;
    match name {
        Some(n) => env.group(n),
        None => inline_group(text, &env),
    }
}

fn group(g: &GroupArg) -> Res<MarkedGroup> {
    resolve(&g.group, g.name.as_deref(), &g.spec)
}

fn surface_spec(s: &SurfaceArgs) -> Res<Option<SurfaceSpec>> {
    if let Some(chi) = s.chi {
        if s.orientable {
            if chi % 2 != 0 || chi > 2 {
                return Err(Error::Invalid(format!(
                    "no orientable surface has Euler characteristic {chi}"
                )));
            }
            return Ok(Some(SurfaceSpec::orientable(((2 - chi) / 2) as usize)));
        }
        return SurfaceSpec::non_orientable_chi(chi).map(Some);
    }
    match (s.orientable, s.non_orientable, s.genus, s.crosscaps) {
        (_, false, Some(g), None) => Ok(Some(SurfaceSpec::orientable(g))),
        (false, true, g, k) | (false, _, g @ None, k @ Some(_)) => {
            let k = k
                .or(g)
                .ok_or_else(|| Error::Invalid("give the number of cross-caps with -k".into()))?;
            Ok(Some(SurfaceSpec::non_orientable(k)))
        }
        (true, false, None, None) => Err(Error::Invalid("give the genus with -g".into())),
        (false, false, None, None) => Ok(None),
        _ => Err(Error::Invalid("inconsistent surface flags".into())),
    }
}

fn require_surface(s: &SurfaceArgs) -> Res<SurfaceSpec> {
    surface_spec(s)?
        .ok_or_else(|| Error::Invalid("give --orientable -g G or --non-orientable -k K".into()))
}

fn fmt_words(m: &MarkedGroup, ws: &[Word]) -> Vec<String> {
    ws.iter().map(|w| m.format(w)).collect()
}

fn check_expect(expect: Option<Expect>, found_witness: bool) -> bool {
    match expect {
        Some(Expect::Witness) => !found_witness,
        Some(Expect::None) => found_witness,
        None => false,
    }
}

fn describe(m: &MarkedGroup) -> Report {
    let ambient = m.ambient_names();
    let marking: Vec<String> = m.marking().iter().map(|w| ambient.format(w)).collect();
    let presentation = m.presentation().map(|p| fmt_words(m, p));
    let splitting = m.splitting.map(|s| format!("{s:?}"));
    let kind = format!("{:?}", m.oracle().kind());
    let mut text = format!(
        "group: {}\ngenerators: {}\n",
        m.name,
        m.names().names().join(", ")
    );
    text += &format!("ambient: {} ({kind})\n", ambient.names().join(", "));
    text += &format!(
        "marking: {}\n",
        m.names()
            .names()
            .iter()
            .zip(&marking)
            .map(|(n, w)| format!("{n} = {w}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    if let Some(p) = &presentation {
        text += &format!(
            "relators: {}\n",
            if p.is_empty() {
                "none".into()
            } else {
                p.join(", ")
            }
        );
    }
    if let Some(s) = &splitting {
        text += &format!("splitting: {s}\n");
    }
    let json = json!({
        "name": m.name,
        "generators": m.names().names(),
        "ambient": ambient.names(),
        "oracle": kind,
        "marking": marking,
        "relators": presentation,
        "splitting": splitting,
    });
    Report::new(text, json)
}

fn verdict_line<W>(v: &Verdict<W>, show: impl Fn(&W) -> String) -> (String, Value) {
    match v {
        Verdict::Violated(w) => {
            let s = show(w);
            (
                format!("violated: {s}"),
                json!({"status": "violated", "witness": s}),
            )
        }
        Verdict::NoWitnessWithin(r) => (
            format!("no witness within {r}"),
            json!({"status": "no_witness_within", "radius": r}),
        ),
    }
}

fn agreement_json(a: &Agreement, names: &Alphabet) -> (String, Value) {
    match a {
        Agreement::Exact { v, witness } => (
            format!("v={v} witness={} d=e^-{v}", names.format(witness)),
            json!({"exact": true, "v": v, "witness": names.format(witness), "distance": a.distance()}),
        ),
        Agreement::AtLeast { bound } => (
            format!("v>={bound} d<=e^-{bound}"),
            json!({"exact": false, "v": bound, "distance": a.distance()}),
        ),
    }
}

fn parse_indices(s: &str) -> Res<Vec<i64>> {
    let bad = || Error::Invalid(format!("bad index list `{s}`"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|_| bad())?;
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect()
}

fn spec_summary(spec: &GraphOfGroupsSpec) -> (String, Value) {
    let local = |v: usize| match &spec.vertices[v] {
        VertexGroup::Free(n) => Alphabet::letters(*n),
        g => Alphabet::standard(g.rank()),
    };
    let mut text = String::new();
    let mut vs = Vec::new();
    for (i, g) in spec.vertices.iter().enumerate() {
        let d = match g {
            VertexGroup::Free(n) => format!("free of rank {n}"),
            VertexGroup::Abelian(a) => format!("{}", mr::describe_abelian(a)),
            VertexGroup::Oracle(o) => format!("{:?} on {} letters", o.kind(), o.alphabet_size()),
        };
        text += &format!("v{i}: {d} <{}>\n", local(i).names().join(","));
        vs.push(d);
    }
    let mut es = Vec::new();
    for (i, e) in spec.edges.iter().enumerate() {
        let f: Vec<String> = e
            .from_images
            .iter()
            .map(|w| local(e.from).format(w))
            .collect();
        let t: Vec<String> = e.to_images.iter().map(|w| local(e.to).format(w)).collect();
        text += &format!(
            "e{i}: v{} -> v{}  [{}] = [{}]\n",
            e.from,
            e.to,
            f.join(", "),
            t.join(", ")
        );
        es.push(json!({"from": e.from, "to": e.to, "from_images": f, "to_images": t}));
    }
    (text, json!({"vertices": vs, "edges": es}))
}

fn graph_spec(m: &MarkedGroup) -> Res<GraphOfGroupsSpec> {
    m.oracle()
        .graph_oracle()
        .map(|g| g.spec().clone())
        .ok_or_else(|| Error::Unsupported(format!("{} is not given as a graph of groups", m.name)))
}

fn hom_json(h: &Hom) -> Value {
    json!({
        "source": h.source.name,
        "target": h.target.name,
        "images": h.source.names().names().iter().zip(h.format_images()).map(|(n, w)| json!([n, w])).collect::<Vec<_>>(),
    })
}

fn hom_text(h: &Hom) -> String {
    h.source
        .names()
        .names()
        .iter()
        .zip(h.format_images())
        .map(|(n, w)| format!("  {n} -> {w}\n"))
        .collect()
}

fn run(cli: &Cli) -> Res<Report> {
    match &cli.cmd {
        Cmd::Ball { g, radius, cap } => {
            let m = group(g)?;
            let ball = m.ball_with_cap(*radius, *cap)?;
            let words = fmt_words(&m, &ball.vertices);
            let text = format!(
                "radius {radius}: {} elements\n{}\n",
                ball.len(),
                words.join("\n")
            );
            let mut r = Report::new(
                text,
                json!({"radius": radius, "count": ball.len(), "vertices": words}),
            );
            r.dot = Some(ball.to_dot(m.names()));
            Ok(r)
        }
        Cmd::Dist { a, b, spec, rmax } => {
            let ga = resolve(a, None, spec)?;
            let gb = resolve(b, None, spec)?;
            let agr = metric::agreement_radius(&ga, &gb, *rmax)?;
            let (t, j) = agreement_json(&agr, ga.names());
            Ok(Report::new(t + "\n", j))
        }
        Cmd::Converge {
            family,
            indices,
            rmax,
        } => {
            let idx = parse_indices(indices)?;
            let (limit, f): (MarkedGroup, fn(i64) -> Res<MarkedGroup>) = match family {
                Family::Cyclic => (MarkedGroup::integers_marked(&[1]), |i| {
                    Ok(MarkedGroup::cyclic(i))
                }),
                Family::Integers => (MarkedGroup::free_abelian(2), |i| {
                    Ok(MarkedGroup::integers_marked(&[1, i]))
                }),
            };
            let rows = metric::converge_check(f, &limit, &idx, *rmax)?;
            let mut text = format!("limit {}\n", limit.name);
            let mut js = Vec::new();
            for row in &rows {
                let (t, j) = agreement_json(&row.agreement, limit.names());
                text += &format!("i={} {t}\n", row.index);
                js.push(json!({"index": row.index, "agreement": j}));
            }
            Ok(Report::new(text, json!({"limit": limit.name, "rows": js})))
        }
        Cmd::Detect {
            g,
            prop,
            radius,
            expect,
        } => {
            let m = group(g)?;
            let p = Property::parse(prop)?;
            let v = detect::detect(&m, p, *radius)?;
            let (t, j) = verdict_line(&v, |w| {
                let mut s = fmt_words(&m, &w.elements).join(", ");
                if let Some(e) = w.exponent {
                    s += &format!(" (order {e})");
                }
                s
            });
            let mut r = Report::new(t + "\n", j);
            r.negative = check_expect(*expect, v.is_violated());
            Ok(r)
        }
        Cmd::Betti { g } => {
            let m = group(g)?;
            let rels = m.presentation().ok_or_else(|| {
                Error::Unsupported(format!("{} has no known presentation", m.name))
            })?;
            let b = detect::betti(m.arity(), rels);
            Ok(Report::new(format!("b1 = {b}\n"), json!({"betti": b})))
        }
        Cmd::Falsify {
            g,
            sentence,
            radius,
            expect,
        } => {
            let m = group(g)?;
            let s = if sentence.trim_start().starts_with("forall") {
                UniversalSentence::parse(sentence)?
            } else {
                let path = if Path::new(&g.group).is_file() {
                    Some(PathBuf::from(&g.group))
                } else {
                    g.spec.clone()
                };
                env_of(&path)?.sentence(sentence)?
            };
            let v = detect::falsify_universal(&m, &s, *radius)?;
            let (t, j) = verdict_line(&v, |ws| {
                s.variables
                    .iter()
                    .zip(ws)
                    .map(|(x, w)| format!("{x} = {}", m.format(w)))
                    .collect::<Vec<_>>()
                    .join(", ")
            });
            let mut r = Report::new(t + "\n", j);
            r.negative = check_expect(*expect, v.is_violated());
            Ok(r)
        }
        Cmd::Construct { g } => Ok(describe(&group(g)?)),
        Cmd::Twist { g, along, power } => {
            let m = group(g)?;
            let c = m.parse(along)?;
            let h = homo::dehn_twist(&m, &c, *power)?;
            Ok(Report::new(hom_text(&h), hom_json(&h)))
        }
        Cmd::Baumslag {
            a,
            c,
            k,
            w,
            rank,
            expect,
        } => {
            let names = Alphabet::letters(*rank);
            let a = a.iter().map(|x| names.parse(x)).collect::<Res<Vec<_>>>()?;
            let c = names.parse(c)?;
            let rep = homo::baumslag_window_check(&a, &c, *k, *w)?;
            let (t, mut j) = verdict_line(&rep.verdict, |ks| format!("exponents {ks:?}"));
            j["min_safe_k"] = json!(rep.min_safe_k);
            let text = format!(
                "{t}\nmin safe K: {}\n",
                rep.min_safe_k.map_or("none".into(), |x| x.to_string())
            );
            let mut r = Report::new(text, j);
            r.negative = check_expect(*expect, rep.verdict.is_violated());
            Ok(r)
        }
        Cmd::Discriminate {
            g,
            ks,
            witness,
            target,
            l,
            radius,
        } => {
            let m = group(g)?;
            if !ks.is_empty() {
                let h = homo::ec_discriminator(&m, ks)?;
                let v = homo::injectivity_radius(&h, *radius)?;
                let (t, mut j) = verdict_line(&v, |w| format!("{} maps to 1", m.format(w)));
                j["injective_radius"] = json!(homo::injective_radius_value(&v));
                j["hom"] = hom_json(&h);
                return Ok(Report::new(format!("{}{t}\n", hom_text(&h)), j));
            }
            let ws = witness
                .iter()
                .map(|w| m.parse(w))
                .collect::<Res<Vec<_>>>()?;
            let tg = resolve(target, None, &g.spec)?;
            let mode = if m.presentation().is_some() {
                homo::HomMode::Presentation
            } else {
                homo::HomMode::CheckedUpTo(4)
            };
            match homo::search_discriminating(&m, &ws, &tg, *l, mode)? {
                Some(h) => Ok(Report::new(
                    hom_text(&h),
                    json!({"found": true, "hom": hom_json(&h)}),
                )),
                None => {
                    let mut r = Report::new(
                        format!("no discriminating map with images of length <= {l}\n"),
                        json!({"found": false}),
                    );
                    r.negative = true;
                    Ok(r)
                }
            }
        }
        Cmd::Sl2 {
            spec,
            hom,
            matrix,
            p,
            witness,
        } => {
            let f = load_spec(spec)?;
            let h = f.hom(hom)?;
            let rep = if matrix.is_empty() {
                SL2Rep::sanov()
            } else {
                let ms = matrix
                    .iter()
                    .map(|s| {
                        let v: Vec<i64> = s
                            .split(',')
                            .map(|x| x.trim().parse())
                            .collect::<Result<_, _>>()
                            .map_err(|_| Error::Invalid(format!("bad matrix `{s}`")))?;
                        <[i64; 4]>::try_from(v)
                            .map_err(|_| Error::Invalid(format!("matrix `{s}` needs 4 entries")))
                    })
                    .collect::<Res<Vec<_>>>()?;
                SL2Rep::from_i64(&ms, *p)?
            };
            let ws = witness
                .iter()
                .map(|w| h.source.parse(w))
                .collect::<Res<Vec<_>>>()?;
            let ok = homo::sl2_certify(&h, &rep, &ws)?;
            let mut r = Report::new(
                format!("certificate {}\n", if ok { "holds" } else { "fails" }),
                json!({"certified": ok}),
            );
            r.negative = !ok;
            Ok(r)
        }
        Cmd::Surface { s } => {
            let spec = require_surface(s)?;
            let m = surface::surface_group(spec)?;
            let chi = spec.euler_characteristic();
            let rel = m.format(&spec.relator());
            let ab = surface::abelian_rank(spec);
            let pc = surface::maximal_pinching_count(spec);
            let text = format!(
                "{spec}: chi = {chi}\ngenerators: {}\nrelator: {rel}\nabelianization rank: {ab}\nmaximal pinchings: {pc}\n",
                m.names().names().join(", ")
            );
            Ok(Report::new(
                text,
                json!({"surface": spec.to_string(), "chi": chi, "generators": m.names().names(), "relator": rel, "abelian_rank": ab, "maximal_pinchings": pc}),
            ))
        }
        Cmd::Pinch { s } => {
            let spec = require_surface(s)?;
            let ps = surface::pinchings(spec)?;
            let mut text = String::new();
            let mut js = Vec::new();
            for (i, p) in ps.iter().enumerate() {
                let kernel = fmt_words(&p.hom.source, &p.kernel);
                text += &format!(
                    "pinching {i} onto F{}:\n{}  kernel: {}\n",
                    p.rank,
                    hom_text(&p.hom),
                    kernel.join(", ")
                );
                js.push(json!({"rank": p.rank, "hom": hom_json(&p.hom), "kernel": kernel}));
            }
            Ok(Report::new(
                text,
                json!({"surface": spec.to_string(), "pinchings": js}),
            ))
        }
        Cmd::Lyndon { l } => {
            let v = surface::lyndon_scan(*l)?;
            let f2 = Alphabet::letters(2);
            let (t, j) = verdict_line(&v, |(a, b, c)| {
                format!(
                    "a = {}, b = {}, c = {}",
                    f2.format(a),
                    f2.format(b),
                    f2.format(c)
                )
            });
            Ok(Report::new(t + "\n", j))
        }
        Cmd::Mr { group: g, s } => {
            let d = match (g, surface_spec(s)?) {
                (Some(text), None) => {
                    let m = resolve(text, None, &None)?;
                    let data = m
                        .oracle()
                        .abelian_data()
                        .ok_or_else(|| Error::Unsupported(format!("{} is not abelian", m.name)))?;
                    mr::abelian_mr(data)?
                }
                (None, Some(spec)) => mr::surface_mr(spec)?,
                _ => {
                    return Err(Error::Invalid(
                        "give either --group or surface flags".into(),
                    ))
                }
            };
            let mut text = String::new();
            for (i, v) in d.vertices.iter().enumerate() {
                text += &format!("v{i}: {}\n", v.name);
            }
            for e in &d.edges {
                text += &format!(
                    "v{} -> v{}: {}\n",
                    e.from,
                    e.to,
                    e.hom.format_images().join(", ")
                );
            }
            let mut r = Report::new(text, d.to_json());
            r.dot = Some(d.to_dot());
            Ok(r)
        }
        Cmd::Factor {
            spec,
            hom,
            s,
            modular,
        } => {
            let h = load_spec(spec)?.hom(hom)?;
            let d = match surface_spec(s)? {
                Some(sp) => mr::surface_mr(sp)?,
                None => {
                    let data = h.source.oracle().abelian_data().ok_or_else(|| {
                        Error::Invalid("give surface flags for a surface-group source".into())
                    })?;
                    mr::abelian_mr(data)?
                }
            };
            let show = |f: &Factorization, via: Option<usize>| -> (String, Value, bool) {
                match f {
                    Factorization::Path { vertices, through } => (
                        format!(
                            "factors through {}{}\n{}",
                            vertices
                                .iter()
                                .map(|v| format!("v{v}"))
                                .collect::<Vec<_>>()
                                .join(" -> "),
                            via.map_or(String::new(), |i| format!(" after automorphism {i}")),
                            hom_text(through)
                        ),
                        json!({"factors": true, "path": vertices, "automorphism": via, "through": hom_json(through)}),
                        false,
                    ),
                    Factorization::Failure { surviving } => {
                        let w = h.source.format(surviving);
                        (
                            format!("does not factor: {w} survives\n"),
                            json!({"factors": false, "surviving": w}),
                            true,
                        )
                    }
                }
            };
            let direct = mr::factor_through(&h, &d)?;
            let (text, json, neg) = match (&direct, modular, &d.kind) {
                (Factorization::Failure { .. }, Some(depth), mr::DiagramKind::Surface(sp)) => {
                    let autos = mr::surface_automorphisms(*sp, *depth)?;
                    match mr::factor_through_modular(&h, &d, &autos)? {
                        Some((i, f)) => show(&f, Some(i)),
                        None => show(&direct, None),
                    }
                }
                _ => show(&direct, None),
            };
            let mut r = Report::new(text, json);
            r.negative = neg;
            Ok(r)
        }
        Cmd::Cyl { g } => {
            let m = group(g)?;
            let cyl = gog::cylinder_graph(&graph_spec(&m)?)?;
            let mut text = String::new();
            for (i, v) in cyl.vertices.iter().enumerate() {
                let grp = match &v.group {
                    gog::CylinderGroup::Cyclic(w) => format!("<{w}>"),
                    gog::CylinderGroup::Whole(r) => format!("Z^{r}"),
                };
                let ends: Vec<String> = v
                    .ends
                    .iter()
                    .map(|e| format!("e{}{}", e.edge, if e.at_from { "-" } else { "+" }))
                    .collect();
                text += &format!("c{i}: vertex v{} {grp} ends {}\n", v.vertex, ends.join(" "));
            }
            for (i, comp) in cyl.components.iter().enumerate() {
                text += &format!("component {i}: edges {comp:?}\n");
            }
            let json = serde_json::to_value(&cyl).expect("serializable");
            let mut r = Report::new(text, json);
            r.dot = Some(cyl.to_dot());
            Ok(r)
        }
        Cmd::Csa { g, expect } => {
            let m = group(g)?;
            let rep = gog::csa_criterion(&graph_spec(&m)?)?;
            let mut text = format!("{}\n", if rep.pass { "PASS" } else { "FAIL" });
            for (i, c) in rep.components.iter().enumerate() {
                let shape = match &c.shape {
                    Some(gog::ComponentShape::Tree { base }) => format!("tree based at c{base}"),
                    Some(gog::ComponentShape::Circle { cycle }) => {
                        format!("circle through edges {cycle:?}")
                    }
                    None => "unshaped".into(),
                };
                text += &format!(
                    "component {i} (edges {:?}): {shape}{}\n",
                    c.edges,
                    c.failure
                        .as_ref()
                        .map_or(String::new(), |f| format!("; {f}"))
                );
            }
            let json = serde_json::to_value(&rep).expect("serializable");
            let mut r = Report::new(text, json);
            r.negative = check_expect(*expect, !rep.pass);
            Ok(r)
        }
        Cmd::Pull {
            g,
            edge,
            reverse,
            all,
        } => {
            let m = group(g)?;
            let spec = graph_spec(&m)?;
            let (out, steps) = match (edge, all) {
                (Some(e), false) => (gog::pull_centralizers(&spec, *e, !reverse)?, 1),
                (None, true) => gog::pull_all(&spec, 64)?,
                _ => return Err(Error::Invalid("give --edge E or --all".into())),
            };
            let pass = gog::csa_criterion(&out)?.pass;
            let (t, j) = spec_summary(&out);
            let text = format!(
                "{t}pulls: {steps}\nCSA criterion: {}\n",
                if pass { "PASS" } else { "FAIL" }
            );
            Ok(Report::new(
                text,
                json!({"spec": j, "pulls": steps, "csa": pass}),
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(r) => {
            if cli.dot {
                match &r.dot {
                    Some(d) => print!("{d}"),
                    None => {
                        eprintln!("error: this command has no DOT output");
                        return ExitCode::from(3);
                    }
                }
            } else if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&r.json).expect("serializable")
                );
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(if r.negative { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_limit() { 2 } else { 3 })
        }
    }
}
