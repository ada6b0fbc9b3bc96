//! The file workflow behind `symtree fit` and `symtree predict`: write a CSV,
//! fit it, save the model as JSON, load it back and predict.
//!
//! ```text
//! cargo run --release --example model_files
//! ```

use std::fs;

use symtree::harness::run_cli;
use symtree::{Dataset, Expression};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("symtree-example-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let data_path = dir.join("train.csv");
    let model_path = dir.join("model.json");

    let rows: Vec<Vec<f64>> = (0..200).map(|i| vec![0.1 + i as f64 * 0.05, (i % 7) as f64 - 3.0]).collect();
    let y: Vec<f64> = rows.iter().map(|r| 3.0 * r[0].sqrt() + r[1] * r[1] - 1.0).collect();
    Dataset::from_rows(&rows, y)?.write_csv(fs::File::create(&data_path)?)?;

    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    let code = run_cli(
        ["symtree", "fit", data_path.to_str().unwrap(), "--out", model_path.to_str().unwrap()],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);

    let model = Expression::from_json(&fs::read_to_string(&model_path)?)?;
    println!("loaded model with {} terms, size {}", model.len(), model.size());
    println!("f(4, 2) = {:.6}", model.eval(&[4.0, 2.0])?);

    let code = run_cli(
        ["symtree", "predict", model_path.to_str().unwrap(), data_path.to_str().unwrap(), "--target-col", "y"],
        &mut Vec::new(),
        &mut err,
    );
    println!("predict exit code {code}");
    fs::remove_dir_all(&dir)?;
    Ok(())
}
