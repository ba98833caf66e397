from treedfloer.cli import main

main()
