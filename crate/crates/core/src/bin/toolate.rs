fn main() {
    std::process::exit(toolate_sim::cli::run(std::env::args_os()));
}
