fn main() {
    let (code, report) = crbirat::cli::run(std::env::args_os());
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    std::process::exit(code);
}
