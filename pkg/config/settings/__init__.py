"""
Settings package.

``base`` holds paths and logging setup, ``runconf`` the layered run
configuration and ``factory`` turns it into component configs.
"""
