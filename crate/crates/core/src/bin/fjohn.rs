fn main() {
    std::process::exit(funjohn::cli::run_command(std::env::args_os()));
}
