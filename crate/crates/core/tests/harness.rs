use krydim::config::parse_config;
use krydim::harness::{run_sweep, SweepConfig, SweepSpec};

fn spec(text: &str) -> SweepSpec {
    parse_config::<SweepConfig>(text).unwrap().try_into().unwrap()
}

const SWEEP: &str = "
variable = n
grid = 40, 80, 160
trials = 6
p = 30
n = 40
lambdas = 12, 8, 5
sigma = 1
seed = 99
m = 4
";

fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap().install(f)
}

#[test]
fn sweep_results_do_not_depend_on_worker_count() {
    let spec = spec(SWEEP);
    let one = with_workers(1, || run_sweep(&spec).unwrap());
    let eight = with_workers(8, || run_sweep(&spec).unwrap());
    assert_eq!(one.to_csv(false), eight.to_csv(false));
    assert_eq!(one.chart("n sweep").render(), eight.chart("n sweep").render());
}

#[test]
fn sweep_artifacts_are_reproducible() {
    let a = run_sweep(&spec(SWEEP)).unwrap();
    let b = run_sweep(&spec(SWEEP)).unwrap();
    assert_eq!(a.to_csv(false), b.to_csv(false));
    assert_eq!(a.chart("n").render(), b.chart("n").render());
    assert_eq!(a.to_csv(false).lines().count(), 1 + 3 * 3);
    assert!(a.points.iter().all(|pt| pt.trials == 6 && pt.failures == 0));
}

#[test]
fn sweep_config_rejects_unknown_keys() {
    assert!(parse_config::<SweepConfig>(&format!("{SWEEP}\nbogus = 1\n")).is_err());
}
