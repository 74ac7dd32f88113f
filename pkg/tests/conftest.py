from hypothesis import settings

settings.register_profile("au", deadline=None, print_blob=True)
settings.load_profile("au")
