fn main() {
    std::process::exit(qboson::cli::run_from_env());
}
