//! Line-delimited recommendation service over standard streams.
//!
//! Each input line is one JSON request; each output line the matching
//! response, order preserved. Malformed requests produce an error document
//! with the id echoed and never terminate the loop.
//!
//! Request forms:
//!   {"id": .., "file": "path", "line": L, "col": C, "k": K}
//!   {"id": .., "context": "inline source", "callee": "name", "pos": N, "k": K}
//!   {"id": .., "observe": {"file": "path", "text": "source fragment"}}

use std::io::{BufRead, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bundle::Bundle;
use crate::corpus::ast::CompilationUnit;
use crate::corpus::request::{extract_requests_including_empty, ArRequest};
use crate::corpus::token::Pos;
use crate::corpus::parse_unit;
use crate::lm::text_subtokens;
use crate::pipeline::{recommend, HeavyClient};
use crate::scalar::Real;
use crate::typesys::{build_type_index, StubFile};

#[derive(Debug, Deserialize)]
struct ServeRequest {
    #[serde(default)]
    id: Value,
    file: Option<String>,
    context: Option<String>,
    callee: Option<String>,
    pos: Option<u32>,
    line: Option<u32>,
    col: Option<u32>,
    k: Option<usize>,
    observe: Option<Observe>,
}

#[derive(Debug, Deserialize)]
struct Observe {
    file: String,
    text: String,
}

#[derive(Debug, Serialize)]
struct ServeCandidate {
    rendered: String,
    #[serde(rename = "exprType")]
    expr_type: String,
    score: f64,
    prob: f64,
    parasim: f64,
    recent: Option<f64>,
    rules: Vec<&'static str>,
    heavy: bool,
}

pub struct ServeState<F> {
    pub bundle: Bundle<F>,
    pub stubs: Vec<StubFile>,
    pub project_units: Vec<CompilationUnit>,
    pub heavy: Option<HeavyClient>,
}

impl<F: Real> ServeState<F> {
    /// One-shot recommendation for a file position; the CLI `recommend`
    /// command is a single service request.
    pub fn recommend_at(
        &mut self,
        file: &str,
        line: u32,
        col: u32,
        k: usize,
    ) -> Result<Value, String> {
        self.handle(&ServeRequest {
            id: Value::Null,
            file: Some(file.to_string()),
            context: None,
            callee: None,
            pos: None,
            line: Some(line),
            col: Some(col),
            k: Some(k),
            observe: None,
        })
    }

    fn handle(&mut self, req: &ServeRequest) -> Result<Value, String> {
        if let Some(obs) = &req.observe {
            let tokens = text_subtokens(&obs.text);
            self.bundle.model.update_cache(&obs.file, &tokens);
            return Ok(serde_json::json!({ "ok": true, "cached": tokens.len() }));
        }
        let (path, source) = match (&req.file, &req.context) {
            (Some(f), _) => (
                f.clone(),
                std::fs::read_to_string(f).map_err(|e| format!("cannot read {f}: {e}"))?,
            ),
            (None, Some(c)) => ("<inline>".to_string(), c.clone()),
            (None, None) => return Err("request needs either 'file' or 'context'".to_string()),
        };
        let unit = Arc::new(parse_unit(&path, &source).map_err(|e| e.to_string())?);
        let mut units: Vec<Arc<CompilationUnit>> = self
            .project_units
            .iter()
            .filter(|u| u.path != unit.path)
            .cloned()
            .map(Arc::new)
            .collect();
        units.push(Arc::clone(&unit));
        let index = build_type_index(&units, &self.stubs).map_err(|e| e.to_string())?;
        let requests = extract_requests_including_empty(&unit, &index);
        let target = select_request(&requests, req)?;
        let k = req.k.unwrap_or(10);
        let ranked = recommend(
            &target,
            k,
            &self.bundle.config,
            &index,
            &self.bundle.model,
            &self.bundle.tables,
            self.heavy.as_mut(),
        )
        .map_err(|e| e.to_string())?;
        let candidates: Vec<ServeCandidate> = ranked
            .items
            .iter()
            .map(|i| ServeCandidate {
                rendered: i.candidate.rendered.clone(),
                expr_type: format!("{:?}", i.candidate.expr_type),
                score: i.score.to_f64().unwrap_or(0.0),
                prob: i.diag.prob.to_f64().unwrap_or(0.0),
                parasim: i.diag.features.parasim_norm.to_f64().unwrap_or(0.0),
                recent: i.diag.recent.and_then(|r| r.to_f64()),
                rules: i.diag.rules_fired.clone(),
                heavy: i.diag.scored_by_heavy,
            })
            .collect();
        Ok(serde_json::json!({
            "callee": target.callee.name(),
            "pos": target.pos,
            "candidates": candidates,
            "warnings": ranked.warnings,
        }))
    }
}

/// Pick the request a service query points at: explicit callee/pos, or the
/// enclosing call's argument slot at the cursor.
fn select_request(requests: &[ArRequest], q: &ServeRequest) -> Result<ArRequest, String> {
    if let (Some(line), Some(col)) = (q.line, q.col) {
        let cursor = Pos::new(line, col);
        let enclosing: Vec<&ArRequest> = requests
            .iter()
            .filter(|r| {
                r.arg_list_span.start <= cursor && cursor <= r.arg_list_span.end
            })
            .collect();
        // innermost call: smallest argument-list span
        let innermost = enclosing.iter().min_by_key(|r| {
            (
                r.arg_list_span.end_off - r.arg_list_span.start_off,
                r.location,
            )
        });
        let Some(any) = innermost else {
            return Err(format!("no call argument at {line}:{col}"));
        };
        // within that call, the slot whose position is closest at or before
        // the cursor
        let same_call: Vec<&&ArRequest> = enclosing
            .iter()
            .filter(|r| r.arg_list_span == any.arg_list_span)
            .collect();
        let best = same_call
            .iter()
            .filter(|r| r.location <= cursor)
            .max_by_key(|r| r.location)
            .or_else(|| same_call.iter().min_by_key(|r| r.pos));
        return best
            .map(|r| (***r).clone())
            .ok_or_else(|| format!("no call argument at {line}:{col}"));
    }
    if let Some(callee) = &q.callee {
        let pos = q.pos.unwrap_or(1);
        return requests
            .iter()
            .find(|r| r.callee.name() == *callee && r.pos == pos)
            .cloned()
            .ok_or_else(|| format!("no request for {callee} at position {pos}"));
    }
    // fall back to the first hole in the unit, then the first request
    requests
        .iter()
        .find(|r| r.gold.is_none())
        .or_else(|| requests.first())
        .cloned()
        .ok_or_else(|| "unit contains no call arguments".to_string())
}

/// Run the service loop until input closes. Never terminates on a bad
/// request; each line gets exactly one response line.
pub fn serve_loop<F: Real, R: BufRead, W: Write>(
    state: &mut ServeState<F>,
    input: R,
    mut output: W,
) -> std::io::Result<()> {
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let response = match serde_json::from_str::<ServeRequest>(&line) {
            Ok(req) => {
                let id = req.id.clone();
                match state.handle(&req) {
                    Ok(mut body) => {
                        if let Some(obj) = body.as_object_mut() {
                            obj.insert("id".to_string(), id);
                        }
                        body
                    }
                    Err(msg) => serde_json::json!({ "id": id, "error": msg }),
                }
            }
            Err(e) => serde_json::json!({ "id": Value::Null, "error": format!("bad request: {e}") }),
        };
        writeln!(output, "{response}")?;
        output.flush()?;
    }
    Ok(())
}
