//! External heavy-scorer protocol: a child process scoring candidate
//! sequences over a line-delimited JSON protocol on its standard streams.
//!
//! Request:  {"id": n, "context": ["tok", ...], "candidates": [["tok", ...], ...]}
//! Response: {"id": n, "scores": [p, ...]}
//!
//! One response line per request line, order preserved. A batch that errors
//! or exceeds the timeout makes the caller fall back to the light model.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(2);

#[derive(Debug, Error)]
pub enum HeavyError {
    #[error("failed to spawn heavy scorer: {0}")]
    Spawn(std::io::Error),
    #[error("heavy scorer pipe error: {0}")]
    Pipe(std::io::Error),
    #[error("heavy scorer timed out after {0:?}")]
    Timeout(Duration),
    #[error("heavy scorer protocol error: {0}")]
    Protocol(String),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ScoreRequest {
    pub id: u64,
    pub context: Vec<String>,
    pub candidates: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ScoreResponse {
    pub id: u64,
    pub scores: Vec<f64>,
}

pub struct HeavyClient {
    child: Child,
    stdin: std::process::ChildStdin,
    lines: mpsc::Receiver<std::io::Result<String>>,
    timeout: Duration,
    next_id: u64,
}

impl HeavyClient {
    pub fn spawn(argv: &[String], timeout: Duration) -> Result<Self, HeavyError> {
        if argv.is_empty() {
            return Err(HeavyError::Protocol("empty heavy command".into()));
        }
        let mut child = Command::new(&argv[0])
            .args(&argv[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(HeavyError::Spawn)?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            let reader = BufReader::new(stdout);
            for line in reader.lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(HeavyClient {
            child,
            stdin,
            lines: rx,
            timeout,
            next_id: 0,
        })
    }

    /// Score a batch of candidate token sequences against a context tail.
    pub fn score_batch(
        &mut self,
        context: &[String],
        candidates: &[Vec<String>],
    ) -> Result<Vec<f64>, HeavyError> {
        let id = self.next_id;
        self.next_id += 1;
        let req = ScoreRequest {
            id,
            context: context.to_vec(),
            candidates: candidates.to_vec(),
        };
        let line = serde_json::to_string(&req)
            .map_err(|e| HeavyError::Protocol(e.to_string()))?;
        writeln!(self.stdin, "{line}").map_err(HeavyError::Pipe)?;
        self.stdin.flush().map_err(HeavyError::Pipe)?;
        let line = self
            .lines
            .recv_timeout(self.timeout)
            .map_err(|_| HeavyError::Timeout(self.timeout))?
            .map_err(HeavyError::Pipe)?;
        let resp: ScoreResponse = serde_json::from_str(&line)
            .map_err(|e| HeavyError::Protocol(format!("bad response: {e}")))?;
        if resp.id != id {
            return Err(HeavyError::Protocol(format!(
                "response id {} does not match request id {id}",
                resp.id
            )));
        }
        if resp.scores.len() != candidates.len() {
            return Err(HeavyError::Protocol(format!(
                "{} scores for {} candidates",
                resp.scores.len(),
                candidates.len()
            )));
        }
        Ok(resp.scores)
    }
}

impl Drop for HeavyClient {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Serve the scorer side of the protocol over arbitrary streams: one
/// response per request line, malformed lines get an error document with
/// the id echoed when recoverable.
pub fn serve_scorer<R: BufRead, W: Write>(
    input: R,
    mut output: W,
    mut score: impl FnMut(&[String], &[Vec<String>]) -> Vec<f64>,
) -> std::io::Result<()> {
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ScoreRequest>(&line) {
            Ok(req) => {
                let scores = score(&req.context, &req.candidates);
                let resp = ScoreResponse { id: req.id, scores };
                writeln!(output, "{}", serde_json::to_string(&resp)?)?;
            }
            Err(e) => {
                writeln!(output, "{{\"error\":\"{e}\"}}")?;
            }
        }
        output.flush()?;
    }
    Ok(())
}
