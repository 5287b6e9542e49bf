from hypothesis import settings

# the first call of each jitted kernel pays for loading its compiled code
settings.register_profile("default", deadline=None)
settings.load_profile("default")
