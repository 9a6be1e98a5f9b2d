fn main() {
    std::process::exit(centerflow_cli::run_from_env());
}
