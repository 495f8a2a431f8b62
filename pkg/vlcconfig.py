verbose = False
showprogress = False
# Should the per-block cost history be kept and written next to the report? Off by default, it grows with the corpus
slim_log = True

evaluation_parameters = {
    # Costs are decimal strings, parsed into exact fractions. alpha0 = 2 * alpha1 is the asymmetry of STT-RAM
    # (reset costs twice the set).
    "alpha0": "2",
    "alpha1": "1",
    # Width of the data words mapped to codewords. 4 is the only width the block codec supports.
    "symbol_bits": 4,
    # Bounds on every leaf depth of the code tree, i.e. on the codeword lengths.
    "min_len": 3,
    "max_len": 5,
    # Memory block (cache line) size in bytes.
    "block_bytes": 64,
    "fnw_word_bits": 8,
    # "include" or "exclude": whether the dirty bit and the FNW flags are costed.
    "flag_policy": "include",
    "cost_fallback": False,
    "codecs": "vlc,fnw,fpc,bdi,fpc+bdi",
    "workers": 1,
    # Number of blocks handed to a worker at once.
    "chunk_blocks": 256,
    "synthetic_blocks": 10000,
    "random_seed": 20151,
    # Number of runner-up code trees kept when searching for the cheapest code.
    "top_candidates": 5,
}
