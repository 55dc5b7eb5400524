//! Input-document model and parser.
//!
//! A document is a line-oriented description of named groups, graphs,
//! cobordisms, and families, followed by a list of requests.  Tokens are
//! whitespace-separated; `#` starts a comment; blank lines are skipped.
//!
//! ```text
//! group Z2 cyclic 2
//! group V product cyclic 2 cyclic 2
//! group K table [[0,1],[1,0]]
//!
//! graph circle
//!   vertices 1
//!   edge 0 0
//! end
//!
//! cobordism C            # fields in any order, closed by `end`
//!   x circle
//!   y circle
//!   core circle
//!   phix_vertices 0
//!   phix_edge 0 : 0+     # image of x-edge 0 as a walk of signed core edges
//!   phiy_vertices 0
//!   phiy_edge 0 : 0+
//!   mode checked         # or `trusted`
//! end
//!
//! family F               # a cobordism with a group action on its core
//!   cobordism C
//!   group Z2
//!   auto 1               # automorphism of the core for element 1
//!     vertex_perm 0
//!     edge_perm 0-       # signed edge images; `-` reverses orientation
//!   end
//! end
//!
//! request operate F Z2 in 0 out 0 beta 1 theta 2
//! request identity circle Z2 basepoints 0 degree 3
//! request gluing F F Z2 p 0 mid 0 q 0 degree 2
//! request monoidality F F Z2 p1 0 q1 0 p2 0 q2 0 degree 2
//! request rebase F Z2 p 0 q 0 pnew 0 1 qnew 0 1 degree 2
//! ```
//!
//! Unspecified `auto` blocks default to the identity automorphism; the
//! action law is validated when the family is assembled.

use std::collections::BTreeMap;

use hhgft::fingroup::FiniteGroup;
use hhgft::hgraph::{
    Dir, EdgeStep, EmbeddingMode, FamilyCobordism, Graph, GraphAutomorphism, GraphCobordism,
    GraphMap,
};
use hhgft::{Caps, Error, Result};

/// A parsed document with all names resolved.
pub struct Document {
    pub groups: BTreeMap<String, FiniteGroup>,
    pub graphs: BTreeMap<String, Graph>,
    pub cobordisms: BTreeMap<String, GraphCobordism>,
    pub families: BTreeMap<String, FamilyCobordism>,
    pub requests: Vec<Request>,
}

/// One request line.  Object names are validated at parse time.
pub enum Request {
    Operate {
        family: String,
        group: String,
        p: Vec<usize>,
        q: Vec<usize>,
        max_beta: usize,
        max_theta: usize,
    },
    Identity {
        graph: String,
        group: String,
        basepoints: Vec<usize>,
        degree: usize,
    },
    Gluing {
        s: String,
        t: String,
        group: String,
        p: Vec<usize>,
        mid: Vec<usize>,
        q: Vec<usize>,
        degree: usize,
    },
    Monoidality {
        s1: String,
        s2: String,
        group: String,
        p1: Vec<usize>,
        q1: Vec<usize>,
        p2: Vec<usize>,
        q2: Vec<usize>,
        degree: usize,
    },
    Rebase {
        family: String,
        group: String,
        p: Vec<usize>,
        q: Vec<usize>,
        p_new: Vec<usize>,
        q_new: Vec<usize>,
        degree: usize,
    },
}

fn fail(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::ValidationFailed(format!("line {line}: {msg}"))
}

/// A tokenized non-blank line with its 1-based source line number.
struct Line {
    no: usize,
    tokens: Vec<String>,
}

fn tokenize(text: &str) -> Vec<Line> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<String> = body.split_whitespace().map(str::to_string).collect();
        if !tokens.is_empty() {
            out.push(Line { no: i + 1, tokens });
        }
    }
    out
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| fail(line, format!("expected {what}, found `{tok}`")))
}

fn parse_usizes(line: usize, toks: &[String], what: &str) -> Result<Vec<usize>> {
    toks.iter().map(|t| parse_usize(line, t, what)).collect()
}

/// `3+` or `3-` as a signed edge step.
fn parse_step(line: usize, tok: &str) -> Result<EdgeStep> {
    let (num, dir) = match tok.as_bytes().last() {
        Some(b'+') => (&tok[..tok.len() - 1], Dir::Fwd),
        Some(b'-') => (&tok[..tok.len() - 1], Dir::Rev),
        _ => return Err(fail(line, format!("edge step `{tok}` must end in `+` or `-`"))),
    };
    Ok((parse_usize(line, num, "edge index")?, dir))
}

/// `3+` or `3-` as an automorphism edge image (index, reversed).
fn parse_perm_step(line: usize, tok: &str) -> Result<(usize, bool)> {
    let (e, d) = parse_step(line, tok)?;
    Ok((e, d == Dir::Rev))
}

/// Parse a group specification: `cyclic n`, `symmetric n`,
/// `product <spec> <spec>`, or `table [[...],[...]]` (table consumes the
/// rest of the tokens).
pub fn parse_group_spec(line: usize, tokens: &[String], caps: &Caps) -> Result<FiniteGroup> {
    let mut pos = 0;
    let g = group_spec_rec(line, tokens, &mut pos, caps)?;
    if pos != tokens.len() {
        return Err(fail(line, format!("unexpected trailing token `{}`", tokens[pos])));
    }
    Ok(g)
}

fn group_spec_rec(
    line: usize,
    tokens: &[String],
    pos: &mut usize,
    caps: &Caps,
) -> Result<FiniteGroup> {
    let head = tokens.get(*pos).ok_or_else(|| fail(line, "missing group specification"))?;
    *pos += 1;
    match head.as_str() {
        "cyclic" => {
            let n = next_count(line, tokens, pos)?;
            if n > caps.max_group_order {
                return Err(Error::GroupOrderCapExceeded(n as u64, caps.max_group_order));
            }
            Ok(FiniteGroup::cyclic(n))
        }
        "symmetric" => {
            let n = next_count(line, tokens, pos)?;
            let mut order = 1u32;
            for k in 2..=n {
                order = order.saturating_mul(k);
            }
            if order > caps.max_group_order {
                return Err(Error::GroupOrderCapExceeded(
                    order as u64,
                    caps.max_group_order,
                ));
            }
            Ok(FiniteGroup::symmetric(n))
        }
        "product" => {
            let a = group_spec_rec(line, tokens, pos, caps)?;
            let b = group_spec_rec(line, tokens, pos, caps)?;
            a.direct_product(&b, caps.max_group_order)
        }
        "table" => {
            let text: String = tokens[*pos..].join("");
            *pos = tokens.len();
            FiniteGroup::from_table(parse_table(line, &text)?)
        }
        other => Err(fail(
            line,
            format!("unknown group specification `{other}` (cyclic, symmetric, product, table)"),
        )),
    }
}

fn next_count(line: usize, tokens: &[String], pos: &mut usize) -> Result<u32> {
    let tok = tokens.get(*pos).ok_or_else(|| fail(line, "missing count"))?;
    *pos += 1;
    let n: u32 =
        tok.parse().map_err(|_| fail(line, format!("expected a count, found `{tok}`")))?;
    if n == 0 {
        return Err(fail(line, "count must be at least 1"));
    }
    Ok(n)
}

/// Parse `[[0,1],[1,0]]` into rows.
fn parse_table(line: usize, text: &str) -> Result<Vec<Vec<u32>>> {
    let inner = text
        .strip_prefix("[[")
        .and_then(|t| t.strip_suffix("]]"))
        .ok_or_else(|| fail(line, "table must look like [[0,1],[1,0]]"))?;
    let mut rows = Vec::new();
    for row in inner.split("],[") {
        if row.is_empty() {
            return Err(fail(line, "empty table row"));
        }
        let mut parsed = Vec::new();
        for cell in row.split(',') {
            parsed.push(
                cell.parse::<u32>()
                    .map_err(|_| fail(line, format!("bad table entry `{cell}`")))?,
            );
        }
        rows.push(parsed);
    }
    Ok(rows)
}

/// Parse a whole document.
pub fn parse_document(text: &str, caps: &Caps) -> Result<Document> {
    let lines = tokenize(text);
    let mut doc = Document {
        groups: BTreeMap::new(),
        graphs: BTreeMap::new(),
        cobordisms: BTreeMap::new(),
        families: BTreeMap::new(),
        requests: Vec::new(),
    };
    let mut i = 0;
    while i < lines.len() {
        let line = &lines[i];
        match line.tokens[0].as_str() {
            "group" => {
                let name = named(line, "group")?;
                let g = parse_group_spec(line.no, &line.tokens[2..], caps)?;
                doc.groups.insert(name, g);
                i += 1;
            }
            "graph" => {
                let name = named(line, "graph")?;
                let (graph, next) = parse_graph_block(&lines, i)?;
                doc.graphs.insert(name, graph);
                i = next;
            }
            "cobordism" => {
                let name = named(line, "cobordism")?;
                let (cob, next) = parse_cobordism_block(&lines, i, &doc)?;
                doc.cobordisms.insert(name, cob);
                i = next;
            }
            "family" => {
                let name = named(line, "family")?;
                let (fam, next) = parse_family_block(&lines, i, &doc)?;
                doc.families.insert(name, fam);
                i = next;
            }
            "request" => {
                doc.requests.push(parse_request(line, &doc)?);
                i += 1;
            }
            other => return Err(fail(line.no, format!("unknown statement `{other}`"))),
        }
    }
    Ok(doc)
}

fn named(line: &Line, kind: &str) -> Result<String> {
    line.tokens
        .get(1)
        .cloned()
        .ok_or_else(|| fail(line.no, format!("`{kind}` needs a name")))
}

/// Find the `end` closing a block opened at `open`, returning the body range.
fn block_body(lines: &[Line], open: usize) -> Result<(usize, usize)> {
    let mut depth = 1;
    for j in open + 1..lines.len() {
        match lines[j].tokens[0].as_str() {
            // Only `auto` opens a nested block inside the grammar.
            "auto" => depth += 1,
            "end" => {
                depth -= 1;
                if depth == 0 {
                    return Ok((open + 1, j));
                }
            }
            _ => {}
        }
    }
    Err(fail(lines[open].no, "unterminated block (missing `end`)"))
}

fn parse_graph_block(lines: &[Line], open: usize) -> Result<(Graph, usize)> {
    let (start, end) = block_body(lines, open)?;
    let mut n_vertices = None;
    let mut edges = Vec::new();
    for line in &lines[start..end] {
        match line.tokens[0].as_str() {
            "vertices" => {
                let tok = line
                    .tokens
                    .get(1)
                    .ok_or_else(|| fail(line.no, "`vertices` needs a count"))?;
                n_vertices = Some(parse_usize(line.no, tok, "vertex count")?);
            }
            "edge" => {
                if line.tokens.len() != 3 {
                    return Err(fail(line.no, "`edge` needs a source and a target vertex"));
                }
                edges.push((
                    parse_usize(line.no, &line.tokens[1], "vertex")?,
                    parse_usize(line.no, &line.tokens[2], "vertex")?,
                ));
            }
            other => return Err(fail(line.no, format!("unknown graph field `{other}`"))),
        }
    }
    let n = n_vertices.ok_or_else(|| fail(lines[open].no, "graph is missing `vertices`"))?;
    let graph = Graph::new(n, edges)
        .map_err(|e| fail(lines[open].no, format!("invalid graph: {e}")))?;
    Ok((graph, end + 1))
}

fn lookup<'a, T>(
    map: &'a BTreeMap<String, T>,
    name: &str,
    kind: &str,
    line: usize,
) -> Result<&'a T> {
    map.get(name).ok_or_else(|| fail(line, format!("unknown {kind} `{name}`")))
}

fn parse_cobordism_block(
    lines: &[Line],
    open: usize,
    doc: &Document,
) -> Result<(GraphCobordism, usize)> {
    let (start, end) = block_body(lines, open)?;
    let open_no = lines[open].no;
    let mut x = None;
    let mut y = None;
    let mut core = None;
    let mut phix_vertices = None;
    let mut phiy_vertices = None;
    let mut phix_edges: BTreeMap<usize, Vec<EdgeStep>> = BTreeMap::new();
    let mut phiy_edges: BTreeMap<usize, Vec<EdgeStep>> = BTreeMap::new();
    let mut mode = EmbeddingMode::CheckedInjective;
    for line in &lines[start..end] {
        let field = line.tokens[0].as_str();
        let rest = &line.tokens[1..];
        match field {
            "x" | "y" | "core" => {
                let name = rest
                    .first()
                    .ok_or_else(|| fail(line.no, format!("`{field}` needs a graph name")))?;
                let graph = lookup(&doc.graphs, name, "graph", line.no)?.clone();
                match field {
                    "x" => x = Some(graph),
                    "y" => y = Some(graph),
                    _ => core = Some(graph),
                }
            }
            "phix_vertices" => {
                phix_vertices = Some(parse_usizes(line.no, rest, "vertex")?);
            }
            "phiy_vertices" => {
                phiy_vertices = Some(parse_usizes(line.no, rest, "vertex")?);
            }
            "phix_edge" | "phiy_edge" => {
                if rest.len() < 2 || rest[1] != ":" {
                    return Err(fail(line.no, format!("`{field}` syntax: {field} <i> : <steps>")));
                }
                let idx = parse_usize(line.no, &rest[0], "edge index")?;
                let steps: Vec<EdgeStep> = rest[2..]
                    .iter()
                    .map(|t| parse_step(line.no, t))
                    .collect::<Result<_>>()?;
                let target =
                    if field == "phix_edge" { &mut phix_edges } else { &mut phiy_edges };
                if target.insert(idx, steps).is_some() {
                    return Err(fail(line.no, format!("duplicate `{field} {idx}`")));
                }
            }
            "mode" => {
                mode = match rest.first().map(String::as_str) {
                    Some("checked") => EmbeddingMode::CheckedInjective,
                    Some("trusted") => EmbeddingMode::Trusted,
                    _ => return Err(fail(line.no, "`mode` must be `checked` or `trusted`")),
                };
            }
            other => return Err(fail(line.no, format!("unknown cobordism field `{other}`"))),
        }
    }
    let x = x.ok_or_else(|| fail(open_no, "cobordism is missing `x`"))?;
    let y = y.ok_or_else(|| fail(open_no, "cobordism is missing `y`"))?;
    let core = core.ok_or_else(|| fail(open_no, "cobordism is missing `core`"))?;
    let phi_x = assemble_map(open_no, "phix", &x, &core, phix_vertices, phix_edges)?;
    let phi_y = assemble_map(open_no, "phiy", &y, &core, phiy_vertices, phiy_edges)?;
    let cob = GraphCobordism::new(x, y, core, phi_x, phi_y, mode)
        .map_err(|e| fail(open_no, format!("invalid cobordism: {e}")))?;
    Ok((cob, end + 1))
}

fn assemble_map(
    line: usize,
    prefix: &str,
    source: &Graph,
    core: &Graph,
    vertices: Option<Vec<usize>>,
    mut edges: BTreeMap<usize, Vec<EdgeStep>>,
) -> Result<GraphMap> {
    let vertices =
        vertices.ok_or_else(|| fail(line, format!("cobordism is missing `{prefix}_vertices`")))?;
    let mut edge_map = Vec::with_capacity(source.n_edges());
    for e in 0..source.n_edges() {
        let steps = edges
            .remove(&e)
            .ok_or_else(|| fail(line, format!("cobordism is missing `{prefix}_edge {e}`")))?;
        edge_map.push(steps);
    }
    if let Some((&extra, _)) = edges.iter().next() {
        return Err(fail(line, format!("`{prefix}_edge {extra}` does not name a source edge")));
    }
    GraphMap::new(source.clone(), core.clone(), vertices, edge_map)
        .map_err(|e| fail(line, format!("invalid {prefix} map: {e}")))
}

fn parse_family_block(
    lines: &[Line],
    open: usize,
    doc: &Document,
) -> Result<(FamilyCobordism, usize)> {
    let (start, end) = block_body(lines, open)?;
    let open_no = lines[open].no;
    let mut cob = None;
    let mut gamma = None;
    let mut autos: BTreeMap<usize, GraphAutomorphism> = BTreeMap::new();
    let mut j = start;
    while j < end {
        let line = &lines[j];
        match line.tokens[0].as_str() {
            "cobordism" => {
                let name = line
                    .tokens
                    .get(1)
                    .ok_or_else(|| fail(line.no, "`cobordism` needs a name"))?;
                cob = Some(lookup(&doc.cobordisms, name, "cobordism", line.no)?.clone());
                j += 1;
            }
            "group" => {
                let name =
                    line.tokens.get(1).ok_or_else(|| fail(line.no, "`group` needs a name"))?;
                gamma = Some(lookup(&doc.groups, name, "group", line.no)?.clone());
                j += 1;
            }
            "auto" => {
                let core = cob
                    .as_ref()
                    .map(|c: &GraphCobordism| c.core.clone())
                    .ok_or_else(|| fail(line.no, "`auto` must come after `cobordism`"))?;
                let idx = parse_usize(
                    line.no,
                    line.tokens
                        .get(1)
                        .ok_or_else(|| fail(line.no, "`auto` needs an element index"))?,
                    "element index",
                )?;
                let (auto, next) = parse_auto_block(lines, j, &core)?;
                autos.insert(idx, auto);
                j = next;
            }
            other => return Err(fail(line.no, format!("unknown family field `{other}`"))),
        }
    }
    let cob = cob.ok_or_else(|| fail(open_no, "family is missing `cobordism`"))?;
    let gamma = gamma.ok_or_else(|| fail(open_no, "family is missing `group`"))?;
    let id = GraphAutomorphism::identity(&cob.core);
    let action: Vec<GraphAutomorphism> = (0..gamma.order() as usize)
        .map(|k| autos.get(&k).cloned().unwrap_or_else(|| id.clone()))
        .collect();
    if let Some((&extra, _)) = autos.iter().find(|(&k, _)| k >= gamma.order() as usize) {
        return Err(fail(open_no, format!("`auto {extra}` does not name a group element")));
    }
    let fam = FamilyCobordism::new(cob, gamma, action)
        .map_err(|e| fail(open_no, format!("invalid family: {e}")))?;
    Ok((fam, end + 1))
}

fn parse_auto_block(
    lines: &[Line],
    open: usize,
    core: &Graph,
) -> Result<(GraphAutomorphism, usize)> {
    let (start, end) = block_body(lines, open)?;
    let open_no = lines[open].no;
    let mut vertex_perm = None;
    let mut edge_perm = None;
    for line in &lines[start..end] {
        match line.tokens[0].as_str() {
            "vertex_perm" => {
                vertex_perm = Some(parse_usizes(line.no, &line.tokens[1..], "vertex")?);
            }
            "edge_perm" => {
                edge_perm = Some(
                    line.tokens[1..]
                        .iter()
                        .map(|t| parse_perm_step(line.no, t))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            other => return Err(fail(line.no, format!("unknown auto field `{other}`"))),
        }
    }
    let vp = vertex_perm.ok_or_else(|| fail(open_no, "auto is missing `vertex_perm`"))?;
    let ep = edge_perm.ok_or_else(|| fail(open_no, "auto is missing `edge_perm`"))?;
    let auto = GraphAutomorphism::new(core, vp, ep)
        .map_err(|e| fail(open_no, format!("invalid automorphism: {e}")))?;
    Ok((auto, end + 1))
}

/// Cursor over the tokens of one request line.
struct Cursor<'a> {
    line: usize,
    tokens: &'a [String],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn word(&mut self, what: &str) -> Result<&'a str> {
        let tok = self
            .tokens
            .get(self.pos)
            .ok_or_else(|| fail(self.line, format!("missing {what}")))?;
        self.pos += 1;
        Ok(tok)
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let tok = self.word(&format!("`{kw}`"))?;
        if tok != kw {
            return Err(fail(self.line, format!("expected `{kw}`, found `{tok}`")));
        }
        Ok(())
    }

    /// `kw` followed by the (possibly empty) run of integers after it.
    fn int_list(&mut self, kw: &str) -> Result<Vec<usize>> {
        self.keyword(kw)?;
        let mut out = Vec::new();
        while let Some(tok) = self.tokens.get(self.pos) {
            match tok.parse::<usize>() {
                Ok(v) => {
                    out.push(v);
                    self.pos += 1;
                }
                Err(_) => break,
            }
        }
        Ok(out)
    }

    fn int(&mut self, kw: &str) -> Result<usize> {
        self.keyword(kw)?;
        let tok = self.word("an integer")?;
        parse_usize(self.line, tok, "an integer")
    }

    /// A referenced object name, validated against the document.
    fn name(&mut self, doc: &Document, kind: Kind) -> Result<String> {
        let what = match kind {
            Kind::Group => "group",
            Kind::Graph => "graph",
            Kind::Family => "family",
        };
        let name = self.word(&format!("{what} name"))?;
        let known = match kind {
            Kind::Group => doc.groups.contains_key(name),
            Kind::Graph => doc.graphs.contains_key(name),
            Kind::Family => doc.families.contains_key(name),
        };
        if !known {
            return Err(fail(self.line, format!("unknown {what} `{name}`")));
        }
        Ok(name.to_string())
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.tokens.len() {
            return Err(fail(
                self.line,
                format!("unexpected trailing token `{}`", self.tokens[self.pos]),
            ));
        }
        Ok(())
    }
}

fn parse_request(line: &Line, doc: &Document) -> Result<Request> {
    let mut c = Cursor { line: line.no, tokens: &line.tokens[1..], pos: 0 };
    let kind = c.word("request kind")?;
    let req = match kind {
        "operate" => {
            let family = c.name(doc, Kind::Family)?;
            let group = c.name(doc, Kind::Group)?;
            let p = c.int_list("in")?;
            let q = c.int_list("out")?;
            let max_beta = c.int("beta")?;
            let max_theta = c.int("theta")?;
            Request::Operate { family, group, p, q, max_beta, max_theta }
        }
        "identity" => {
            let graph = c.name(doc, Kind::Graph)?;
            let group = c.name(doc, Kind::Group)?;
            let basepoints = c.int_list("basepoints")?;
            let degree = c.int("degree")?;
            Request::Identity { graph, group, basepoints, degree }
        }
        "gluing" => {
            let s = c.name(doc, Kind::Family)?;
            let t = c.name(doc, Kind::Family)?;
            let group = c.name(doc, Kind::Group)?;
            let p = c.int_list("p")?;
            let mid = c.int_list("mid")?;
            let q = c.int_list("q")?;
            let degree = c.int("degree")?;
            Request::Gluing { s, t, group, p, mid, q, degree }
        }
        "monoidality" => {
            let s1 = c.name(doc, Kind::Family)?;
            let s2 = c.name(doc, Kind::Family)?;
            let group = c.name(doc, Kind::Group)?;
            let p1 = c.int_list("p1")?;
            let q1 = c.int_list("q1")?;
            let p2 = c.int_list("p2")?;
            let q2 = c.int_list("q2")?;
            let degree = c.int("degree")?;
            Request::Monoidality { s1, s2, group, p1, q1, p2, q2, degree }
        }
        "rebase" => {
            let family = c.name(doc, Kind::Family)?;
            let group = c.name(doc, Kind::Group)?;
            let p = c.int_list("p")?;
            let q = c.int_list("q")?;
            let p_new = c.int_list("pnew")?;
            let q_new = c.int_list("qnew")?;
            let degree = c.int("degree")?;
            Request::Rebase { family, group, p, q, p_new, q_new, degree }
        }
        other => {
            return Err(fail(
                line.no,
                format!(
                    "unknown request `{other}` \
                     (operate, identity, gluing, monoidality, rebase)"
                ),
            ))
        }
    };
    c.finish()?;
    Ok(req)
}

enum Kind {
    Group,
    Graph,
    Family,
}
