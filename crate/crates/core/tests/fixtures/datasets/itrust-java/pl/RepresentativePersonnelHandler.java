public class RepresentativePersonnelHandler {
    public void displayRepresentative(Representative representative) {
        representativeStore.display(representative);
    }
    public void updatePersonnel(Personnel personnel) {
        personnelStore.update(personnel);
    }
    public void loadPersonnel(Personnel personnel) {
        personnelStore.load(personnel);
    }
    public void validateRepresentative(Representative representative) {
        representativeStore.validate(representative);
    }
}
