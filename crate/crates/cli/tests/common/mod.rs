//! Golden cases for the `hsdual` binary, shared by the CLI tests and the
//! acceptance harness.

#![allow(dead_code)]

use std::fs;
use std::path::Path;
use std::process::Command;

pub const BIN: &str = env!("CARGO_BIN_EXE_hsdual");

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the binary in a fresh directory holding `files`.
pub fn run(files: &[(&str, String)], args: &[&str], env: &[(&str, &str)]) -> Run {
    let dir = tempfile::tempdir().expect("temporary directory");
    for (name, body) in files {
        fs::write(dir.path().join(name), body).expect("write fixture");
    }
    run_in(dir.path(), args, env)
}

pub fn run_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.current_dir(dir).args(args).env_remove("HSDUAL_MAX_DIM");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn hsdual");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Compact input file from `(re, im)` rows.
pub fn matrix(rows: &[&[(f64, f64)]]) -> String {
    let body: Vec<String> = rows
        .iter()
        .map(|r| {
            let cells: Vec<String> = r
                .iter()
                .map(|(re, im)| format!("[{re:?},{im:?}]"))
                .collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!(
        "{{\"format\":1,\"rows\":{},\"cols\":{},\"data\":[{}]}}",
        rows.len(),
        rows[0].len(),
        body.join(",")
    )
}

pub fn column(entries: &[(f64, f64)]) -> String {
    let rows: Vec<&[(f64, f64)]> = entries.chunks(1).collect();
    matrix(&rows)
}

pub fn channel(dim: usize, kraus: &[String]) -> String {
    format!(
        "{{\"format\":1,\"dim\":{dim},\"kraus\":[{}]}}",
        kraus.join(",")
    )
}

/// Expected output layout; `rows` holds literal `[re, im]` cells.
pub fn layout(rows: &[&[&str]]) -> String {
    let mut out = format!(
        "{{\n  \"format\": 1,\n  \"rows\": {},\n  \"cols\": {},\n  \"data\": [\n",
        rows.len(),
        rows[0].len()
    );
    for (i, r) in rows.iter().enumerate() {
        let sep = if i + 1 < rows.len() { "," } else { "" };
        out.push_str(&format!("    [{}]{sep}\n", r.join(", ")));
    }
    out.push_str("  ]\n}\n");
    out
}

const O: (f64, f64) = (0.0, 0.0);
const I: (f64, f64) = (1.0, 0.0);
const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn identity2() -> String {
    matrix(&[&[I, O], &[O, I]])
}

pub fn pauli_x() -> String {
    matrix(&[&[O, I], &[I, O]])
}

fn scaled_identity2(s: f64) -> String {
    matrix(&[&[(s, 0.0), O], &[O, (s, 0.0)]])
}

fn x_over_root2() -> String {
    matrix(&[&[O, (H, 0.0)], &[(H, 0.0), O]])
}

fn z_over_root2() -> String {
    matrix(&[&[(H, 0.0), O], &[O, (-H, 0.0)]])
}

pub struct Case {
    pub name: &'static str,
    pub files: Vec<(&'static str, String)>,
    pub args: Vec<&'static str>,
    pub env: Vec<(&'static str, &'static str)>,
    pub code: i32,
    /// Exact expected standard output, when the case pins it.
    pub stdout: Option<String>,
    pub stderr_contains: Option<&'static str>,
}

impl Case {
    fn new(name: &'static str, files: Vec<(&'static str, String)>, args: &[&'static str]) -> Self {
        Self {
            name,
            files,
            args: args.to_vec(),
            env: Vec::new(),
            code: 0,
            stdout: None,
            stderr_contains: None,
        }
    }

    fn stdout(mut self, s: impl Into<String>) -> Self {
        self.stdout = Some(s.into());
        self
    }

    fn code(mut self, c: i32) -> Self {
        self.code = c;
        self
    }

    fn stderr(mut self, s: &'static str) -> Self {
        self.stderr_contains = Some(s);
        self
    }

    fn env(mut self, k: &'static str, v: &'static str) -> Self {
        self.env.push((k, v));
        self
    }

    /// Runs the case and describes the first mismatch.
    pub fn check(&self) -> Result<(), String> {
        let out = run(&self.files, &self.args, &self.env);
        if out.code != self.code {
            return Err(format!(
                "{}: exit {} (expected {})\nstderr: {}",
                self.name, out.code, self.code, out.stderr
            ));
        }
        if let Some(expected) = &self.stdout {
            if &out.stdout != expected {
                return Err(format!(
                    "{}: stdout differs\n--- expected\n{expected}--- got\n{}",
                    self.name, out.stdout
                ));
            }
        }
        if let Some(needle) = self.stderr_contains {
            if !out.stderr.contains(needle) {
                return Err(format!(
                    "{}: stderr lacks '{needle}': {}",
                    self.name, out.stderr
                ));
            }
        }
        Ok(())
    }
}

/// Every command example plus every error path of the exit-code contract.
pub fn cases() -> Vec<Case> {
    let a = (1.5, 0.0);
    let b = (-2.0, 0.25);
    let c = (0.125, 0.0);
    let d = (0.0, 3.0);
    let abcd = matrix(&[&[a, b], &[c, d]]);
    let acbd = column(&[a, c, b, d]);
    let corners = layout(&[
        &["[1, 0]", "[0, 0]", "[0, 0]", "[1, 0]"],
        &["[0, 0]", "[0, 0]", "[0, 0]", "[0, 0]"],
        &["[0, 0]", "[0, 0]", "[0, 0]", "[0, 0]"],
        &["[1, 0]", "[0, 0]", "[0, 0]", "[1, 0]"],
    ]);
    let id4 = layout(&[
        &["[1, 0]", "[0, 0]", "[0, 0]", "[0, 0]"],
        &["[0, 0]", "[1, 0]", "[0, 0]", "[0, 0]"],
        &["[0, 0]", "[0, 0]", "[1, 0]", "[0, 0]"],
        &["[0, 0]", "[0, 0]", "[0, 0]", "[1, 0]"],
    ]);
    let id_channel = channel(2, &[identity2()]);
    let x_channel = channel(2, &[pauli_x()]);
    let phase_basis = matrix(&[&[I, O], &[O, (0.0, 1.0)]]);

    vec![
        // vec
        Case::new(
            "vec identity",
            vec![("a.json", identity2())],
            &["vec", "a.json"],
        )
        .stdout(layout(&[
            &["[1, 0]"],
            &["[0, 0]"],
            &["[0, 0]"],
            &["[1, 0]"],
        ])),
        Case::new(
            "vec column stacking",
            vec![("a.json", abcd.clone())],
            &["vec", "a.json"],
        )
        .stdout(layout(&[
            &["[1.5, 0]"],
            &["[0.125, 0]"],
            &["[-2, 0.25]"],
            &["[0, 3]"],
        ])),
        // J(A) = colstack(A U Uᵀ) with U = diag(1, i) flips the second column
        Case::new(
            "vec phase basis",
            vec![("a.json", abcd.clone()), ("u.json", phase_basis.clone())],
            &["vec", "a.json", "--basis-h1", "u.json"],
        )
        .stdout(layout(&[
            &["[1.5, 0]"],
            &["[0.125, 0]"],
            &["[2, -0.25]"],
            &["[0, -3]"],
        ])),
        Case::new(
            "vec digits",
            vec![("a.json", matrix(&[&[(0.1, 0.0)]]))],
            &["vec", "a.json", "--digits", "3"],
        )
        .stdout(layout(&[&["[0.1, 0]"]])),
        Case::new(
            "vec full digits",
            vec![("a.json", matrix(&[&[(0.1, 0.0)]]))],
            &["vec", "a.json"],
        )
        .stdout(layout(&[&["[0.10000000000000001, 0]"]])),
        // devec
        Case::new(
            "devec identity",
            vec![("v.json", column(&[I, O, O, I]))],
            &["devec", "v.json", "--d1", "2", "--d2", "2"],
        )
        .stdout(layout(&[&["[1, 0]", "[0, 0]"], &["[0, 0]", "[1, 0]"]])),
        Case::new(
            "devec unstacking",
            vec![("v.json", acbd.clone())],
            &["devec", "v.json", "--d1", "2", "--d2", "2"],
        )
        .stdout(layout(&[
            &["[1.5, 0]", "[-2, 0.25]"],
            &["[0.125, 0]", "[0, 3]"],
        ])),
        Case::new(
            "devec rectangular",
            vec![(
                "v.json",
                column(&[
                    (1.0, 0.0),
                    (2.0, 0.0),
                    (3.0, 0.0),
                    (4.0, 0.0),
                    (5.0, 0.0),
                    (6.0, 0.0),
                ]),
            )],
            &["devec", "v.json", "--d1", "2", "--d2", "3"],
        )
        .stdout(layout(&[
            &["[1, 0]", "[4, 0]"],
            &["[2, 0]", "[5, 0]"],
            &["[3, 0]", "[6, 0]"],
        ])),
        Case::new(
            "devec length mismatch",
            vec![("v.json", column(&[I, O, O, I, O]))],
            &["devec", "v.json", "--d1", "2", "--d2", "2"],
        )
        .code(3),
        Case::new(
            "devec non-column",
            vec![("v.json", identity2())],
            &["devec", "v.json", "--d1", "2", "--d2", "2"],
        )
        .code(3),
        // choi
        Case::new(
            "choi identity",
            vec![("c.json", id_channel.clone())],
            &["choi", "c.json"],
        )
        .stdout(corners.clone()),
        Case::new(
            "choi bit flip",
            vec![("c.json", x_channel.clone())],
            &["choi", "c.json"],
        )
        .stdout(layout(&[
            &["[0, 0]", "[0, 0]", "[0, 0]", "[0, 0]"],
            &["[0, 0]", "[1, 0]", "[1, 0]", "[0, 0]"],
            &["[0, 0]", "[1, 0]", "[1, 0]", "[0, 0]"],
            &["[0, 0]", "[0, 0]", "[0, 0]", "[0, 0]"],
        ])),
        Case::new(
            "choi normalize",
            vec![("c.json", id_channel.clone())],
            &["choi", "c.json", "--normalize"],
        )
        .stdout(layout(&[
            &["[0.5, 0]", "[0, 0]", "[0, 0]", "[0.5, 0]"],
            &["[0, 0]", "[0, 0]", "[0, 0]", "[0, 0]"],
            &["[0, 0]", "[0, 0]", "[0, 0]", "[0, 0]"],
            &["[0.5, 0]", "[0, 0]", "[0, 0]", "[0.5, 0]"],
        ])),
        // check
        Case::new(
            "check identity",
            vec![("c.json", id_channel.clone())],
            &["check", "c.json"],
        )
        .stdout("cp: PASS (min eigenvalue = 0)\ntp: PASS (deviation = 0)\n"),
        Case::new(
            "check doubled identity",
            vec![("c.json", channel(2, &[scaled_identity2(2.0)]))],
            &["check", "c.json", "--tp"],
        )
        .stdout("tp: FAIL (deviation = 3)\n")
        .code(1),
        Case::new(
            "check doubled identity both",
            vec![("c.json", channel(2, &[scaled_identity2(2.0)]))],
            &["check", "c.json"],
        )
        .stdout("cp: PASS (min eigenvalue = 0)\ntp: FAIL (deviation = 3)\n")
        .code(1),
        Case::new(
            "check pauli mixture",
            vec![("c.json", channel(2, &[x_over_root2(), z_over_root2()]))],
            &["check", "c.json", "--cp", "--tp"],
        )
        .stdout("cp: PASS (min eigenvalue = 0)\ntp: PASS (deviation = 2.2204460492503131e-16)\n"),
        Case::new(
            "check cp only",
            vec![("c.json", id_channel.clone())],
            &["check", "c.json", "--cp"],
        )
        .stdout("cp: PASS (min eigenvalue = 0)\n"),
        // compose
        Case::new(
            "compose identities",
            vec![
                ("a.json", id_channel.clone()),
                ("b.json", id_channel.clone()),
            ],
            &["compose", "a.json", "b.json"],
        )
        .stdout(id4.clone()),
        Case::new(
            "compose bit flips",
            vec![("a.json", x_channel.clone()), ("b.json", x_channel.clone())],
            &["compose", "a.json", "b.json"],
        )
        .stdout(id4.clone()),
        Case::new(
            "compose verify",
            vec![
                ("a.json", channel(2, &[x_over_root2(), z_over_root2()])),
                ("b.json", x_channel.clone()),
                ("c.json", id_channel.clone()),
            ],
            &["compose", "a.json", "b.json", "c.json", "--verify"],
        )
        .stderr("verify: PASS"),
        Case::new(
            "compose dimension mismatch",
            vec![
                ("a.json", id_channel.clone()),
                ("b.json", channel(1, &[matrix(&[&[I]])])),
            ],
            &["compose", "a.json", "b.json"],
        )
        .code(3),
        Case::new(
            "compose single file",
            vec![("a.json", id_channel.clone())],
            &["compose", "a.json"],
        )
        .code(2),
        // schmidt
        Case::new(
            "schmidt product",
            vec![("v.json", column(&[I, O, O, O]))],
            &["schmidt", "v.json", "--d1", "2", "--d2", "2"],
        )
        .stdout("lambdas: [1]\nrank: 1\nentangled: no\n"),
        Case::new(
            "schmidt bell",
            vec![("v.json", column(&[(H, 0.0), O, O, (H, 0.0)]))],
            &["schmidt", "v.json", "--d1", "2", "--d2", "2"],
        )
        .stdout("lambdas: [0.707106781187, 0.707106781187]\nrank: 2\nentangled: yes\n"),
        Case::new(
            "schmidt zero",
            vec![("v.json", column(&[O, O, O, O]))],
            &["schmidt", "v.json", "--d1", "2", "--d2", "2"],
        )
        .stdout("lambdas: []\nrank: 0\nentangled: no\n"),
        Case::new(
            "schmidt length mismatch",
            vec![("v.json", column(&[I, O, O, O]))],
            &["schmidt", "v.json", "--d1", "2", "--d2", "3"],
        )
        .code(3),
        // selftest
        Case::new(
            "selftest unknown suite",
            vec![],
            &["selftest", "--suite", "nonsense"],
        )
        .code(2),
        // parse and usage errors
        Case::new(
            "malformed json",
            vec![("a.json", "{\"rows\": 2".into())],
            &["vec", "a.json"],
        )
        .code(2),
        Case::new(
            "ragged data",
            vec![(
                "a.json",
                "{\"format\":1,\"rows\":2,\"cols\":2,\"data\":[[[1,0],[0,0]],[[1,0]]]}".into(),
            )],
            &["vec", "a.json"],
        )
        .code(2),
        Case::new("missing file", vec![], &["vec", "absent.json"]).code(2),
        Case::new("unknown subcommand", vec![], &["frobnicate"]).code(2),
        Case::new(
            "non-unitary basis",
            vec![("a.json", identity2()), ("u.json", scaled_identity2(2.0))],
            &["vec", "a.json", "--basis-h1", "u.json"],
        )
        .code(2),
        Case::new(
            "basis of the wrong size",
            vec![("a.json", identity2()), ("u.json", matrix(&[&[I]]))],
            &["vec", "a.json", "--basis-h2", "u.json"],
        )
        .code(3),
        Case::new(
            "bad digits",
            vec![("a.json", identity2())],
            &["vec", "a.json", "--digits", "0"],
        )
        .code(2),
        Case::new(
            "kraus operator of the wrong size",
            vec![("c.json", channel(3, &[identity2()]))],
            &["check", "c.json"],
        )
        .code(3),
        Case::new(
            "dimension guard",
            vec![("a.json", identity2())],
            &["vec", "a.json"],
        )
        .env("HSDUAL_MAX_DIM", "1")
        .code(3),
        Case::new(
            "dimension guard override",
            vec![("v.json", column(&[I, O, O, I]))],
            &["devec", "v.json", "--d1", "2", "--d2", "2"],
        )
        .env("HSDUAL_MAX_DIM", "2")
        .stdout(layout(&[&["[1, 0]", "[0, 0]"], &["[0, 0]", "[1, 0]"]])),
        Case::new(
            "malformed dimension guard",
            vec![("a.json", identity2())],
            &["vec", "a.json"],
        )
        .env("HSDUAL_MAX_DIM", "many")
        .code(2),
        Case::new(
            "bench invalid config",
            vec![],
            &[
                "bench",
                "--dim",
                "2",
                "--kraus-rank",
                "0",
                "--chain-length",
                "1",
            ],
        )
        .code(2),
        Case::new(
            "bench dimension guard",
            vec![],
            &[
                "bench",
                "--dim",
                "65",
                "--kraus-rank",
                "1",
                "--chain-length",
                "1",
            ],
        )
        .code(3),
    ]
}

/// `vec` followed by `devec` reproduces a canonical file byte for byte.
pub fn round_trip() -> Result<(), String> {
    let original = layout(&[
        &["[1.5, -0.5]", "[0.25, 0]", "[-3, 0.125]"],
        &["[0, 0]", "[2, 2]", "[0.75, -1]"],
    ]);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    fs::write(dir.path().join("a.json"), &original).map_err(|e| e.to_string())?;
    let v = run_in(dir.path(), &["vec", "a.json"], &[]);
    if v.code != 0 {
        return Err(format!("vec failed: {}", v.stderr));
    }
    fs::write(dir.path().join("v.json"), &v.stdout).map_err(|e| e.to_string())?;
    let back = run_in(
        dir.path(),
        &["devec", "v.json", "--d1", "3", "--d2", "2"],
        &[],
    );
    if back.code != 0 || back.stdout != original {
        return Err(format!("round trip differs:\n{}", back.stdout));
    }
    Ok(())
}
