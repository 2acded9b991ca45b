from hypothesis import settings

# derandomize so the suite is reproducible run to run
settings.register_profile("ci", derandomize=True)
settings.load_profile("ci")
