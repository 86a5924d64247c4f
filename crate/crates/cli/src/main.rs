fn main() {
    std::process::exit(fakeflow_cli::run(std::env::args_os()));
}
