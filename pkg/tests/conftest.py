# Anchors pytest's rootdir-based sys.path insertion so tests can import the
# shared `oracles` module as a plain top-level module.
