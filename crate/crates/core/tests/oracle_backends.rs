use eo_core::signature::is_balanced;
use eo_core::tractable::{support_oracle, OracleBackend};
use eo_core::{ExactValue, Grid, Signature, Slot};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn external() -> OracleBackend {
    OracleBackend::External(vec![env!("CARGO_BIN_EXE_eo-sat").to_string()])
}

fn random_eo(arity: usize, rng: &mut ChaCha8Rng) -> Signature {
    let values = (0..1u32 << arity)
        .map(|a| {
            if is_balanced(a, arity) && rng.gen_bool(0.6) {
                ExactValue::from_int(rng.gen_range(1..3))
            } else {
                ExactValue::zero()
            }
        })
        .collect();
    Signature::new(arity, values).unwrap()
}

fn random_grid(rng: &mut ChaCha8Rng) -> Grid {
    let mut g = Grid::new();
    let mut ports = Vec::new();
    while ports.len() < 4 || ports.len() < rng.gen_range(4..=20) {
        let k = *[2usize, 4, 4, 6].choose(rng).unwrap();
        if ports.len() + k > 20 {
            break;
        }
        let v = g.add_vertex(format!("v{}", g.vertices.len()), random_eo(k, rng));
        ports.extend((0..k).map(|p| Slot::new(v, p)));
    }
    ports.shuffle(rng);
    for pair in ports.chunks(2) {
        g.connect(pair[0].vertex, pair[0].port, pair[1].vertex, pair[1].port);
    }
    g
}

#[test]
fn backends_agree_on_feasibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ext = external();
    let mut queries = 0;
    let mut sat = 0;
    while queries < 200 {
        let g = random_grid(&mut rng);
        for (v, vert) in g.vertices.iter().enumerate() {
            for a in vert.signature.support() {
                let x = support_oracle(&g, v, a, &OracleBackend::Exhaustive).unwrap();
                let y = support_oracle(&g, v, a, &ext).unwrap();
                assert_eq!(x.is_some(), y.is_some(), "vertex {v} string {a}");
                sat += x.is_some() as usize;
                queries += 1;
            }
        }
    }
    assert!(sat > 0 && sat < queries);
}

#[test]
fn solver_reports_unsat() {
    use std::io::Write;
    use std::process::{Command, Stdio};
    let mut child = Command::new(env!("CARGO_BIN_EXE_eo-sat"))
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"c x and not x\np cnf 2 3\n1 0\n-1 2 0\n-2 0\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "UNSAT");
}
