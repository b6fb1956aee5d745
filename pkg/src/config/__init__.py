from .loader import CONFIG_ENV, KEYS, build_routing, load_config, merge, parse_config, sweep_settings
