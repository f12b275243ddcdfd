fn main() {
    std::process::exit(webquery::cli::main_entry(std::env::args_os()));
}
