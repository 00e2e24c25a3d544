//! The command-line request format, driven through the library.
//!
//! Each line is `{"command": ..., "params": {...}}`, the same form the binary reads
//! in `--batch` mode. Run with `cargo run --example json_requests`.

use rcgc_kit::cli::{run_batch, OutputFormat};

fn main() {
    let input = r#"{"command":"wigner-d","params":{"k":"5/2","q":"-1/2","qp":"3/2","phi":"3pi/2","theta":"pi/6","psi":"5pi/4"}}
{"command":"sphfun","params":{"family":"xi_m","k":"5/2","q":"-1/2","qp":"3/2","x1":"pi/6,pi/4","x2":"pi/3,pi"}}
{"command":"cgc","params":{"j1":"1","m1":"1","j2":"1","m2":"-1","j":"0","m":"0","oracle":true}}
{"command":"wigner-d","params":{"k":"1","q":"2","qp":"0","phi":"0","theta":"0","psi":"0"}}
"#;
    let mut out = Vec::new();
    let code = run_batch(input.as_bytes(), &mut out, OutputFormat::Json);
    print!("{}", String::from_utf8_lossy(&out));
    println!("batch exit code {code}");
}
