//! The three commands chained through files, called in-process:
//! `simulate` -> `learn` -> `metrics`.

use graphlearn::cli;

fn main() {
    let dir = std::env::temp_dir().join(format!("graphlearn-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = |name: &str| dir.join(name).display().to_string();

    let steps: Vec<Vec<String>> = vec![
        vec!["simulate", "--p", "15", "--k", "3", "--n", "1500", "--dist", "t", "--nu", "5", "--seed", "8"]
            .into_iter()
            .map(String::from)
            .chain(["--out-graph".into(), path("truth.json"), "--out-data".into(), path("data.csv"), "--out-labels".into(), path("labels.csv")])
            .collect(),
        vec!["learn".into(), "--input".into(), path("data.csv"), "--method".into(), "kt".into(), "--k".into(), "3".into(), "--nu".into(), "5".into(), "--out".into(), path("graph.json")],
        vec!["metrics".into(), "--graph".into(), path("graph.json"), "--labels".into(), path("labels.csv"), "--compare".into(), path("truth.json")],
    ];
    for args in steps {
        println!("$ graphlearn {}", args.join(" "));
        let code = cli::run(std::iter::once("graphlearn".to_string()).chain(args));
        println!("exit code {code}\n");
        if code == cli::EXIT_ERROR {
            break;
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
}
