from kn_osss.cli import main


if __name__ == "__main__":
    main()
