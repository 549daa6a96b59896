public class MessageImmunizationController {
    public void approveImmunization(Immunization immunization) {
        immunizationStore.approve(immunization);
    }
    public void editMessage(Message message) {
        messageStore.edit(message);
    }
    public void displayImmunization(Immunization immunization) {
        immunizationStore.display(immunization);
    }
    public void saveMessage(Message message) {
        messageStore.save(message);
    }
}
