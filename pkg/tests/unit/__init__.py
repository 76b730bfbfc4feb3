# Package marker for unit level tests.
