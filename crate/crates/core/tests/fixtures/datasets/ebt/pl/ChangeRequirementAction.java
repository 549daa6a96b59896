public class ChangeRequirementAction {
    public void displayChange(Change change) {
        changeStore.display(change);
    }
    public void findChange(Change change) {
        changeStore.find(change);
    }
}
