int scorewin_placeholder_test_rng;
