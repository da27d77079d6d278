fn main() {
    std::process::exit(degcauchy::cli::run(std::env::args_os()));
}
